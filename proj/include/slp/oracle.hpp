#pragma once

// Brute-force reference implementations on plain strings. Quadratic or worse;
// shares nothing with the compressed-side algorithms beyond the result types.

#include <algorithm>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "slp/core.hpp"
#include "slp/regularity_types.hpp"

namespace slp::oracle {

using Symbols = std::span<const Symbol>;

/// Straightforward recursive expansion of the root.
inline std::vector<Symbol> decompress(const Slp& slp) {
  std::vector<std::vector<Symbol>> val(slp.size() + 1);
  for (Var i = 1; i <= slp.size(); ++i) {
    const Production& p = slp.rule(i);
    if (p.is_terminal()) {
      val[i] = {p.symbol()};
    } else {
      val[i] = val[p.left()];
      val[i].insert(val[i].end(), val[p.right()].begin(), val[p.right()].end());
    }
  }
  symbols_read.fetch_add(val[slp.root()].size(), std::memory_order_relaxed);
  return val[slp.root()];
}

/// For each period c, maximal stretches with t[i] = t[i+c]; keep the smallest c per interval.
inline std::vector<Run> naive_runs(Symbols t) {
  const Pos n = t.size();
  std::map<std::pair<Pos, Pos>, Pos> best;
  for (Pos c = 1; 2 * c <= n; ++c) {
    Pos i = 0;
    while (i + c < n) {
      if (t[i] != t[i + c]) {
        ++i;
        continue;
      }
      Pos j = i;
      while (j + c < n && t[j] == t[j + c]) ++j;
      // t[i..j-1] matches t[i+c..j-1+c]; the interval is [i, j-1+c] (0-based)
      if (j - i >= c) {
        auto key = std::make_pair(i + 1, j + c);
        auto it = best.find(key);
        if (it == best.end() || it->second > c) best[key] = c;
      }
      i = j;
    }
  }
  std::vector<Run> out;
  for (auto& [k, c] : best) out.push_back({k.first, k.second, c});
  std::sort(out.begin(), out.end());
  return out;
}

/// Second method: enumerate every square, merge same-period squares at consecutive
/// starts, keep the smallest period per interval.
inline std::vector<Run> naive_runs_from_squares(Symbols t) {
  const Pos n = t.size();
  std::map<std::pair<Pos, Pos>, Pos> best;
  for (Pos len = 1; 2 * len <= n; ++len) {
    Pos start = 0, last = 0;
    bool open = false;
    auto flush = [&] {
      if (!open) return;
      auto key = std::make_pair(start + 1, last + 2 * len);
      auto it = best.find(key);
      if (it == best.end() || it->second > len) best[key] = len;
      open = false;
    };
    for (Pos i = 0; i + 2 * len <= n; ++i) {
      bool square = true;
      for (Pos k = 0; k < len && square; ++k) square = t[i + k] == t[i + len + k];
      if (square) {
        if (!open || last + 1 != i) {
          flush();
          open = true;
          start = i;
        }
        last = i;
      } else {
        flush();
      }
    }
    flush();
  }
  std::vector<Run> out;
  for (auto& [k, c] : best) out.push_back({k.first, k.second, c});
  std::sort(out.begin(), out.end());
  return out;
}

/// Every gap placement, arms extended while symmetric; arms must be nonempty.
inline std::vector<GappedPal> naive_gpals(Symbols t, Pos g) {
  const Pos n = t.size();
  std::vector<GappedPal> out;
  // j = 1-based end of the left arm; the right arm starts at j + g + 1
  for (Pos j = 1; j + g + 1 <= n; ++j) {
    Pos a = 0;
    while (j > a && j + g + 1 + a <= n && t[j - a - 1] == t[j + g + a]) ++a;
    if (a >= 1) out.push_back({j - a + 1, j + g + a});
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Pos naive_lce(Symbols t, LceMode mode, Pos k1, Pos k2) {
  const Pos n = t.size();
  Pos a = 0;
  switch (mode) {
    case LceMode::RR:
      while (k1 + a <= n && k2 + a <= n && t[k1 + a - 1] == t[k2 + a - 1]) ++a;
      break;
    case LceMode::LL:
      while (k1 > a && k2 > a && t[k1 - a - 1] == t[k2 - a - 1]) ++a;
      break;
    case LceMode::LR:
      while (k1 > a && k2 + a <= n && t[k1 - a - 1] == t[k2 + a - 1]) ++a;
      break;
    case LceMode::RL:
      while (k2 > a && k1 + a <= n && t[k2 - a - 1] == t[k1 + a - 1]) ++a;
      break;
  }
  return a;
}

inline std::vector<Pos> naive_occ(Symbols t, Symbols p) {
  std::vector<Pos> out;
  if (p.empty() || p.size() > t.size()) return out;
  for (Pos i = 0; i + p.size() <= t.size(); ++i)
    if (std::equal(p.begin(), p.end(), t.begin() + i)) out.push_back(i + 1);
  return out;
}

inline bool naive_is_primitive(Symbols u) {
  const Pos len = u.size();
  for (Pos d = 1; d < len; ++d) {
    if (len % d) continue;
    bool periodic = true;
    for (Pos k = d; k < len && periodic; ++k) periodic = u[k] == u[k - d];
    if (periodic) return false;
  }
  return true;
}

namespace detail {

// Karp-Rabin fingerprints mod 2^61 - 1 for O(log N) extension queries.
class Fingerprints {
 public:
  explicit Fingerprints(Symbols t) : t_(t), h_(t.size() + 1, 0), pw_(t.size() + 1, 1) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      h_[i + 1] = add(mul(h_[i], kBase), t[i] + 1);
      pw_[i + 1] = mul(pw_[i], kBase);
    }
  }
  // hash of t[i, i+len) (0-based)
  std::uint64_t get(std::size_t i, std::size_t len) const {
    return add(h_[i + len], kMod - mul(h_[i], pw_[len]));
  }
  // longest common prefix of t[i..] and t[j..] (0-based)
  std::size_t lcp(std::size_t i, std::size_t j) const {
    std::size_t lo = 0, hi = t_.size() - std::max(i, j);
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo + 1) / 2;
      if (get(i, mid) == get(j, mid))
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }

 private:
  static constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
  static constexpr std::uint64_t kBase = 1000003;
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t s = a + b;
    return s >= kMod ? s - kMod : s;
  }
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    return add(static_cast<std::uint64_t>(p & kMod), static_cast<std::uint64_t>(p >> 61));
  }
  Symbols t_;
  std::vector<std::uint64_t> h_, pw_;
};

}  // namespace detail

/// Runs from Lyndon roots: for both symbol orders, the longest Lyndon word at
/// every position is a candidate root, extended with fingerprint comparisons.
/// Near-linear, for texts too long for the quadratic scans.
inline std::vector<Run> lyndon_runs(Symbols t) {
  const std::size_t n = t.size();
  std::vector<Symbol> rev(t.rbegin(), t.rend());
  const detail::Fingerprints fwd(t), bwd(rev);
  auto lcs = [&](std::size_t i, std::size_t j) {  // common suffix of t[..i] and t[..j], 0-based inclusive
    return bwd.lcp(n - 1 - i, n - 1 - j);
  };
  std::map<std::pair<Pos, Pos>, Pos> best;
  std::vector<std::size_t> lyn(n + 1, 0);
  for (int order = 0; order < 2; ++order) {
    // suffix i precedes suffix j in the chosen order (a proper prefix comes first)
    auto less = [&](std::size_t i, std::size_t j) {
      const std::size_t l = fwd.lcp(i, j);
      if (i + l == n) return true;
      if (j + l == n) return false;
      return order == 0 ? t[i + l] < t[j + l] : t[i + l] > t[j + l];
    };
    for (std::size_t i = n; i-- > 0;) {
      std::size_t j = i + 1;
      while (j < n && less(j, i) == false) j += lyn[j];
      lyn[i] = j - i;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t p = lyn[i];
      if (i + p >= n) continue;
      const std::size_t right = fwd.lcp(i, i + p);
      const std::size_t left = i == 0 ? 0 : lcs(i - 1, i + p - 1);
      if (left + right < p) continue;
      auto key = std::make_pair(Pos(i - left + 1), Pos(i + p + right));
      auto it = best.find(key);
      if (it == best.end() || it->second > p) best[key] = p;
    }
  }
  std::vector<Run> out;
  for (auto& [k, c] : best) out.push_back({k.first, k.second, c});
  std::sort(out.begin(), out.end());
  return out;
}

/// Occurrences (i, len) of squares uu with u primitive.
inline Pos naive_square_count(Symbols t) {
  const Pos n = t.size();
  Pos count = 0;
  for (Pos len = 1; 2 * len <= n; ++len)
    for (Pos i = 0; i + 2 * len <= n; ++i) {
      if (!std::equal(t.begin() + i, t.begin() + i + len, t.begin() + i + len)) continue;
      if (naive_is_primitive(t.subspan(i, len))) ++count;
    }
  return count;
}

}  // namespace slp::oracle
