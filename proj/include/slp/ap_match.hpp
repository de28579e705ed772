#pragma once

// Arithmetic-progression occurrence sets, the table of boundary-crossing
// occurrences between a text grammar and a pattern grammar, and windowed
// local search.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "slp/core.hpp"

namespace slp {

/// { first + diff*j : 0 <= j < count }. diff is meaningless when count <= 1.
struct ArithProg {
  Pos first = 0;
  Pos diff = 0;
  Pos count = 0;

  bool empty() const noexcept { return count == 0; }
  Pos last() const noexcept { return count == 0 ? 0 : first + diff * (count - 1); }
  Pos term(Pos j) const noexcept { return first + diff * j; }
  bool contains(Pos x) const noexcept {
    if (count == 0 || x < first || x > last()) return false;
    if (count == 1) return x == first;
    return (x - first) % diff == 0;
  }

  static ArithProg single(Pos x) { return {x, 1, 1}; }
  /// Canonical form: diff = 1 for singletons and 0 for the empty set.
  ArithProg normalized() const {
    if (count == 0) return {};
    if (count == 1) return single(first);
    return *this;
  }
  friend bool operator==(const ArithProg& a, const ArithProg& b) {
    const auto x = a.normalized(), y = b.normalized();
    return x.first == y.first && x.diff == y.diff && x.count == y.count;
  }
};

/// Terms of ap inside [b, e].
inline ArithProg ap_window(const ArithProg& ap, Pos b, Pos e) {
  if (ap.empty() || b > e || e < ap.first || b > ap.last()) return {};
  if (ap.count == 1) return ap.normalized();
  const Pos lo = b <= ap.first ? 0 : (b - ap.first + ap.diff - 1) / ap.diff;
  const Pos hi = std::min(ap.count - 1, (e - ap.first) / ap.diff);
  if (lo > hi) return {};
  return ArithProg{ap.term(lo), ap.diff, hi - lo + 1}.normalized();
}

inline ArithProg ap_shift(const ArithProg& ap, std::int64_t delta) {
  if (ap.empty()) return {};
  return {static_cast<Pos>(static_cast<std::int64_t>(ap.first) + delta), ap.diff, ap.count};
}

/// Accumulates disjoint progressions whose union is known to be a single progression.
class ApUnion {
 public:
  void add(const ArithProg& ap) {
    if (ap.empty()) return;
    if (count_ == 0) {
      lo_ = ap.first;
      hi_ = ap.last();
    } else {
      lo_ = std::min(lo_, ap.first);
      hi_ = std::max(hi_, ap.last());
    }
    count_ += ap.count;
  }
  ArithProg result() const {
    if (count_ == 0) return {};
    if (count_ == 1) return ArithProg::single(lo_);
    assert((hi_ - lo_) % (count_ - 1) == 0);
    return {lo_, (hi_ - lo_) / (count_ - 1), count_};
  }

 private:
  Pos lo_ = 0, hi_ = 0, count_ = 0;
};

/// Boundary-crossing occurrence table Occ^xi(X, Y) for X in `text`, Y in `pattern`.
///
/// Entries are filled on first use, in dependency order (an entry for Y only
/// reads entries for proper descendants of Y), and cached. `fill_all` forces
/// every entry. Not safe for concurrent use while entries are being filled.
class ApTable {
 public:
  ApTable(const Slp& text, const Slp& pattern) : text_(&text), pattern_(&pattern) {}

  const Slp& text() const { return *text_; }
  const Slp& pattern() const { return *pattern_; }

  /// Occurrences of val(Y) in val(X) that begin in X's left child and end in its right child.
  const ArithProg& entry(Var x, Var y) {
    const std::uint64_t key = (std::uint64_t{x} << 32) | y;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    ArithProg value = compute(x, y);
    return cache_.emplace(key, value).first->second;
  }

  void fill_all() {
    for (Var y = 1; y <= pattern_->size(); ++y)
      for (Var x = 1; x <= text_->size(); ++x) entry(x, y);
  }

  std::size_t computed_entries() const { return cache_.size(); }

  /// k in Occ(val(X), val(Y)); false when the occurrence would leave val(X).
  bool match(Var x, Var y, Pos k) {
    const Pos ylen = pattern_->length(y);
    if (k < 1 || k > text_->length(x) || ylen > text_->length(x) - k + 1) return false;
    if (ylen == 1) return detail::symbol_at(*text_, x, k) == pattern_->rule(y).symbol();
    const NodeLocator z = crossing_node(*text_, x, {k, k + ylen - 1});
    return entry(z.label, y).contains(k - z.position + 1);
  }

  /// lcp(val(X)[k..], val(Y)) by descent into Y.
  Pos prefix_match(Var x, Var y, Pos k) {
    const Pos xlen = text_->length(x);
    Pos acc = 0;
    for (;;) {
      if (k > xlen) return acc;
      const Production& p = pattern_->rule(y);
      if (p.is_terminal()) return acc + (detail::symbol_at(*text_, x, k) == p.symbol() ? 1 : 0);
      if (match(x, p.left(), k)) {
        const Pos l = pattern_->length(p.left());
        acc += l;
        k += l;
        y = p.right();
      } else {
        y = p.left();
      }
    }
  }

  /// lcs(val(X)[1..e], val(Y)) by descent into Y.
  Pos suffix_match(Var x, Var y, Pos e) {
    Pos acc = 0;
    for (;;) {
      if (e == 0) return acc;
      const Production& p = pattern_->rule(y);
      if (p.is_terminal()) return acc + (detail::symbol_at(*text_, x, e) == p.symbol() ? 1 : 0);
      const Pos r = pattern_->length(p.right());
      if (r <= e && match(x, p.right(), e - r + 1)) {
        acc += r;
        e -= r;
        y = p.left();
      } else {
        y = p.right();
      }
    }
  }

  /// Occ(val(X), val(Y)) ∩ [lo, hi] for a window with hi - lo <= |Y|: a single progression.
  ArithProg occurrences(Var x, Var y, Pos lo, Pos hi) {
    const Pos ylen = pattern_->length(y);
    const Pos xlen = text_->length(x);
    if (ylen > xlen) return {};
    hi = std::min(hi, xlen - ylen + 1);
    lo = std::max<Pos>(lo, 1);
    if (lo > hi) return {};
    assert(hi - lo <= ylen);
    ApUnion acc;
    collect(x, 0, y, ylen, lo, hi, acc);
    return acc.result();
  }

 private:
  // Occurrences starting in [lo, hi] (global coordinates of the outer text
  // variable) that lie completely inside the node (v, offset).
  void collect(Var v, Pos offset, Var y, Pos ylen, Pos lo, Pos hi, ApUnion& acc) {
    const Pos vlen = text_->length(v);
    if (vlen < ylen) return;
    lo = std::max(lo, offset + 1);
    hi = std::min(hi, offset + vlen - ylen + 1);
    if (lo > hi) return;
    const Production& p = text_->rule(v);
    if (p.is_terminal()) {
      if (p.symbol() == pattern_->rule(y).symbol()) acc.add(ArithProg::single(offset + 1));
      return;
    }
    if (ylen >= 2) acc.add(ap_window(ap_shift(entry(v, y), static_cast<std::int64_t>(offset)), lo, hi));
    collect(p.left(), offset, y, ylen, lo, hi, acc);
    collect(p.right(), offset + text_->length(p.left()), y, ylen, lo, hi, acc);
  }

  ArithProg compute(Var x, Var y) {
    const Pos ylen = pattern_->length(y);
    const Pos xlen = text_->length(x);
    const Production& px = text_->rule(x);
    const Production& py = pattern_->rule(y);
    if (px.is_terminal() || py.is_terminal() || ylen > xlen) return {};
    const Pos split = text_->length(px.left());
    const Var yl = py.left(), yr = py.right();
    const Pos a = pattern_->length(yl), r = pattern_->length(yr);
    const Pos last_start = xlen - ylen + 1;

    ApUnion acc;

    // Case 1: position `split` lies under the left part of Y. Candidates are
    // occurrences of Y_l covering that position.
    {
      ArithProg cand;
      if (a == 1) {
        if (detail::symbol_at(*text_, x, split) == pattern_->rule(yl).symbol()) cand = ArithProg::single(split);
      } else {
        const ArithProg crossing = entry(x, yl);
        const bool flush = split >= a && match(x, yl, split - a + 1);
        cand = crossing;
        if (flush) {
          const Pos u0 = split - a + 1;
          if (crossing.empty()) {
            cand = ArithProg::single(u0);
          } else {
            const Pos d = crossing.count >= 2 ? crossing.diff : crossing.first - u0;
            assert(crossing.first - u0 == d);
            cand = {u0, d, crossing.count + 1};
          }
        }
      }
      cand = ap_window(cand, 1, last_start);
      acc.add(resolve_forward(x, y, ylen, a, yr, cand));
    }

    // Case 2: position `split` lies under the right part of Y but is not its
    // last position. Candidates are crossing occurrences of Y_r.
    if (r >= 2) {
      ArithProg cand = entry(x, yr);
      cand = ap_window(cand, a + 1, xlen);
      ArithProg starts = resolve_backward(x, y, ylen, r, yl, cand);
      acc.add(ap_shift(starts, -static_cast<std::int64_t>(a)));
    }
    return acc.result();
  }

  // cand: starts of Y_l occurrences (consecutive, one block). Returns the
  // subset where Y occurs.
  ArithProg resolve_forward(Var x, Var y, Pos ylen, Pos a, Var yr, const ArithProg& cand) {
    if (cand.empty()) return {};
    if (cand.count <= 2) {
      ApUnion acc;
      for (Pos j = 0; j < cand.count; ++j)
        if (match(x, yr, cand.term(j) + a)) acc.add(ArithProg::single(cand.term(j)));
      return acc.result();
    }
    // All candidates sit in one block of period cand.diff that Y_l shares;
    // the extension lengths f(j) = lcp(X[u_j..], Y) are non-increasing
    // relative to f(0) up to one exceptional index.
    auto f = [&](Pos j) { return prefix_match(x, y, cand.term(j)); };
    const Pos f0 = f(0);
    Pos lo = 0, hi = cand.count - 1;
    while (lo < hi) {
      const Pos mid = lo + (hi - lo + 1) / 2;
      if (f(mid) >= f0)
        lo = mid;
      else
        hi = mid - 1;
    }
    if (f0 >= ylen) return {cand.first, cand.diff, lo + 1};
    if (lo > 0 && f(lo) >= ylen) return ArithProg::single(cand.term(lo));
    return {};
  }

  // cand: starts of Y_r occurrences. Returns the starts of those Y_r
  // occurrences that are preceded by Y_l (so Y occurs at start - |Y_l|).
  ArithProg resolve_backward(Var x, Var y, Pos ylen, Pos r, Var yl, const ArithProg& cand) {
    if (cand.empty()) return {};
    const Pos a = pattern_->length(yl);
    if (cand.count <= 2) {
      ApUnion acc;
      for (Pos j = 0; j < cand.count; ++j)
        if (match(x, yl, cand.term(j) - a)) acc.add(ArithProg::single(cand.term(j)));
      return acc.result();
    }
    // Mirror image of resolve_forward, indexed from the rightmost candidate.
    const Pos m = cand.count - 1;
    auto end_of = [&](Pos j) { return cand.term(m - j) + r - 1; };
    auto f = [&](Pos j) { return suffix_match(x, y, end_of(j)); };
    const Pos f0 = f(0);
    Pos lo = 0, hi = m;
    while (lo < hi) {
      const Pos mid = lo + (hi - lo + 1) / 2;
      if (f(mid) >= f0)
        lo = mid;
      else
        hi = mid - 1;
    }
    if (f0 >= ylen) return {cand.term(m - lo), cand.diff, lo + 1};
    if (lo > 0 && f(lo) >= ylen) return ArithProg::single(cand.term(m - lo));
    return {};
  }

  const Slp* text_;
  const Slp* pattern_;
  std::unordered_map<std::uint64_t, ArithProg> cache_;
};

/// Eagerly filled table for every (text, pattern) variable pair.
inline ApTable compute_ap_table(const Slp& text, const Slp& pattern) {
  ApTable table(text, pattern);
  table.fill_all();
  return table;
}

/// Positive rational num/den.
struct Ratio {
  std::uint64_t num = 1;
  std::uint64_t den = 1;
};

/// Occ(val(X_text_var), val(Y_p)) ∩ [b, b + floor(alpha*|p|)] as at most ceil(alpha) progressions,
/// one per sub-window of |p|+1 starting positions, in increasing order.
inline std::vector<ArithProg> local_search(ApTable& table, Var text_var, Var p, Pos b, Ratio alpha) {
  if (alpha.num == 0 || alpha.den == 0) throw domain_error("alpha must be positive");
  const Pos plen = table.pattern().length(p);
  const Pos xlen = table.text().length(text_var);
  std::vector<ArithProg> out;
  if (b < 1) b = 1;
  if (plen > xlen || b > xlen - plen + 1) return out;
  const unsigned __int128 reach = static_cast<unsigned __int128>(alpha.num) * plen / alpha.den;
  const unsigned __int128 end128 = static_cast<unsigned __int128>(b) + reach;
  const Pos e = static_cast<Pos>(std::min<unsigned __int128>(end128, xlen - plen + 1));
  for (Pos lo = b; lo <= e;) {
    const Pos hi = e - lo < plen ? e : lo + plen;
    ArithProg ap = table.occurrences(text_var, p, lo, hi);
    if (!ap.empty()) out.push_back(ap);
    if (hi == e) break;
    lo = hi + 1;
  }
  return out;
}

}  // namespace slp
