#pragma once

// Runs and gapped palindromes of the text derived by an SLP, found per
// variable from seeds on approximately doubling chains and reported in
// compact (arithmetic) form.

#include <algorithm>
#include <exception>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "slp/ap_match.hpp"
#include "slp/doubling.hpp"
#include "slp/grammar_io.hpp"
#include "slp/lce.hpp"
#include "slp/regularity_types.hpp"

namespace slp {

/// { <d1 - c*j, d2 + c*j, d3 + c*j> : 0 <= j < k }; the third component is the period.
struct RunQuintuplet {
  Pos d1 = 0;
  Pos d2 = 0;
  Pos d3 = 0;
  Pos c = 1;
  Pos k = 1;

  Run at(Pos j) const { return {d1 - c * j, d2 + c * j, d3 + c * j}; }
  /// Index j of the member with interval [b, e], if any.
  std::optional<Pos> find(Pos b, Pos e) const {
    if (b + e != d1 + d2 || b > d1 || (d1 - b) % c != 0) return std::nullopt;
    const Pos j = (d1 - b) / c;
    if (j >= k) return std::nullopt;
    return j;
  }
  friend auto operator<=>(const RunQuintuplet&, const RunQuintuplet&) = default;
};

/// { <b0 + db*j, e0 + de*j> : 0 <= j < k }.
struct GPalGroup {
  Pos b0 = 0;
  Pos e0 = 0;
  std::int64_t db = 0;
  std::int64_t de = 0;
  Pos k = 1;

  GappedPal at(Pos j) const {
    return {Pos(std::int64_t(b0) + db * std::int64_t(j)), Pos(std::int64_t(e0) + de * std::int64_t(j))};
  }
  friend auto operator<=>(const GPalGroup&, const GPalGroup&) = default;
};

enum class Arm { Left, Right };

namespace detail {

using Wide = __int128;

inline Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline Wide ceil_div(Wide a, Wide b) { return -floor_div(-a, b); }

// val(X) read forwards or backwards. Position k of the mirrored reading is
// position M - k + 1 of val(X).
class View {
 public:
  View(LceEngine& lce, Var var, bool mirrored)
      : lce_(&lce), var_(var), m_(lce.grammar().length(var)), mirrored_(mirrored) {}

  Pos length() const { return m_; }
  bool mirrored() const { return mirrored_; }

  /// lcp of the suffixes starting at i and j; 0 outside [1, M].
  Pos fwd(Wide i, Wide j) const {
    if (i < 1 || j < 1 || i > m_ || j > m_) return 0;
    if (mirrored_) return lce_->within(var_, LceMode::LL, m_ - Pos(i) + 1, m_ - Pos(j) + 1);
    return lce_->within(var_, LceMode::RR, Pos(i), Pos(j));
  }
  /// lcs of the prefixes ending at i and j; 0 outside [1, M].
  Pos bwd(Wide i, Wide j) const {
    if (i < 1 || j < 1 || i > m_ || j > m_) return 0;
    if (mirrored_) return lce_->within(var_, LceMode::RR, m_ - Pos(i) + 1, m_ - Pos(j) + 1);
    return lce_->within(var_, LceMode::LL, Pos(i), Pos(j));
  }
  /// lcp(rev(W[1..i]), W[j..]) for this reading W; 0 outside [1, M].
  Pos lr(Wide i, Wide j) const {
    if (i < 1 || j < 1 || i > m_ || j > m_) return 0;
    if (mirrored_) return lce_->within(var_, LceMode::RL, m_ - Pos(i) + 1, m_ - Pos(j) + 1);
    return lce_->within(var_, LceMode::LR, Pos(i), Pos(j));
  }

 private:
  LceEngine* lce_;
  Var var_;
  Pos m_;
  bool mirrored_;
};

}  // namespace detail

/// Extensions around a seed occurrence p = W[P..P+|p|-1] and a progression of
/// copies q_j = q_0 + c*j (q_0 > P, c <= |p|) inside one view W:
/// lcp_at(j) = lcp(W[P+|p|..], W[q_j+|p|..]), lcs_at(j) = lcs(W[..P-1], W[..q_j-1]).
class ExtensionProfile {
 public:
  ExtensionProfile(const detail::View& view, Pos seed, Pos plen, const ArithProg& copies)
      : view_(&view), seed_(seed), plen_(plen), q0_(copies.first), c_(copies.count > 1 ? copies.diff : plen),
        k_(copies.count) {
    if (copies.count > 1 && copies.diff > plen) throw domain_error("progression step exceeds seed length");
    using detail::Wide;
    const Wide p = plen, c = c_;
    alpha_r_ = c + Wide(view.fwd(q0_, Wide(q0_) + c)) - p;
    beta_r_ = c + Wide(view.fwd(seed_, Wide(seed_) + c)) - p;
    alpha_l_ = c + Wide(view.bwd(Wide(q0_) + p - 1, Wide(q0_) + p - 1 - c)) - p;
    beta_l_ = c + Wide(view.bwd(Wide(seed_) + p - 1, Wide(seed_) + p - 1 - c)) - p;
    j1_ = alpha_r_ > beta_r_ ? detail::ceil_div(alpha_r_ - beta_r_, c) : 0;
    j2_ = beta_l_ > alpha_l_ ? detail::ceil_div(beta_l_ - alpha_l_, c) : 0;
  }

  detail::Wide alpha_right() const { return alpha_r_; }
  detail::Wide beta_right() const { return beta_r_; }
  detail::Wide alpha_left() const { return alpha_l_; }
  detail::Wide beta_left() const { return beta_l_; }
  /// First j with alpha_right - c*j <= beta_right / alpha_left + c*j >= beta_left.
  detail::Wide j_right() const { return j1_; }
  detail::Wide j_left() const { return j2_; }
  Pos step() const { return c_; }
  Pos count() const { return k_; }
  Pos copy(Pos j) const { return q0_ + c_ * j; }

  Pos lcp_at(Pos j) const {
    using detail::Wide;
    const Wide v = alpha_r_ - Wide(c_) * j;
    if (v != beta_r_) return Pos(std::min(v, beta_r_));
    const Wide off = Wide(plen_) + beta_r_;
    return Pos(beta_r_) + view_->fwd(Wide(seed_) + off, Wide(copy(j)) + off);
  }
  Pos lcs_at(Pos j) const {
    using detail::Wide;
    const Wide v = alpha_l_ + Wide(c_) * j;
    if (v != beta_l_) return Pos(std::min(v, beta_l_));
    return Pos(beta_l_) + view_->bwd(Wide(seed_) - 1 - beta_l_, Wide(copy(j)) - 1 - beta_l_);
  }

 private:
  const detail::View* view_;
  Pos seed_, plen_, q0_, c_, k_;
  detail::Wide alpha_r_ = 0, beta_r_ = 0, alpha_l_ = 0, beta_l_ = 0, j1_ = 0, j2_ = 0;
};

/// Maximal repetitions whose period is the distance from the seed at P to one
/// of the copies, in view coordinates. One family for the regular part of the
/// progression plus at most two individually checked members.
inline std::vector<RunQuintuplet> runs_from_ap(const detail::View& view, Pos seed, Pos plen,
                                               const ArithProg& copies) {
  using detail::Wide;
  std::vector<RunQuintuplet> out;
  auto single = [&](Pos q) {
    const Pos right = view.fwd(seed, q);
    const Pos left = view.bwd(Wide(seed) - 1, Wide(q) - 1);
    const Pos d = q - seed;
    if (Wide(left) + right >= d) out.push_back({seed - left, q + right - 1, d, 1, 1});
  };
  if (copies.empty()) return out;
  if (copies.count == 1 || copies.diff > plen) {
    for (Pos j = 0; j < copies.count; ++j) single(copies.term(j));
    return out;
  }
  const ExtensionProfile prof(view, seed, plen, copies);
  const Wide c = prof.step(), d0 = Wide(copies.first) - seed;
  const Wide k = prof.beta_right() + prof.alpha_left() - (d0 - plen);
  if (k >= c) {
    // the stretch has period c, so only a copy at distance exactly c can give a primitive root
    if (d0 == c) single(copies.first);
    return out;
  }
  const Wide regular = std::min({prof.j_right(), prof.j_left(), Wide(copies.count)});
  if (k >= 0 && regular > 0)
    out.push_back({Pos(Wide(seed) - prof.alpha_left()), Pos(Wide(copies.first) + plen + prof.beta_right() - 1),
                   Pos(d0), Pos(c), Pos(regular)});
  for (Wide j : {prof.j_right(), prof.j_left()}) {
    if (j >= Wide(copies.count)) continue;
    const Pos jj = Pos(j);
    const Pos right = plen + prof.lcp_at(jj), left = prof.lcs_at(jj);
    const Pos q = prof.copy(jj), d = q - seed;
    if (Wide(left) + right >= d) out.push_back({seed - left, q + right - 1, d, 1, 1});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Seeds for one grammar: doubling chains of every variable, kept in one
/// universe so that a single lazy AP table serves all of them.
class RegularityEngine {
 public:
  explicit RegularityEngine(const Slp& grammar) : base_(grammar) {
    const Var n = grammar.size();
    prefix_.resize(n + 1);
    suffix_.resize(n + 1);
    rev_prefix_.resize(n + 1);
    rev_suffix_.resize(n + 1);
    lce_ = std::make_unique<LceEngine>(grammar, [&](GrammarBuilder& b, const Universe& u) {
      for (Var i = 1; i <= n; ++i) {
        const Production& p = grammar.rule(i);
        if (p.is_terminal()) continue;
        if (suffix_[p.left()].empty()) suffix_[p.left()] = append_chain(b, p.left(), Side::Suffix);
        if (prefix_[p.right()].empty()) prefix_[p.right()] = append_chain(b, p.right(), Side::Prefix);
        // reversed seeds for gapped palindromes
        if (rev_prefix_[p.left()].empty()) rev_prefix_[p.left()] = append_chain(b, u.mirror(p.left()), Side::Prefix);
        if (rev_suffix_[p.right()].empty())
          rev_suffix_[p.right()] = append_chain(b, u.mirror(p.right()), Side::Suffix);
      }
    });
    for (auto* chains : {&prefix_, &suffix_, &rev_prefix_, &rev_suffix_}) {
      auto& lens = chains == &prefix_ ? prefix_len_
                   : chains == &suffix_ ? suffix_len_
                   : chains == &rev_prefix_ ? rev_prefix_len_
                                            : rev_suffix_len_;
      lens.resize(n + 1);
      for (Var v = 1; v <= n; ++v)
        for (Var y : (*chains)[v]) lens[v].push_back(lce_->grammar().length(y));
    }
  }

  const Slp& grammar() const { return base_; }
  LceEngine& lce() { return *lce_; }
  const std::vector<Var>& prefix_chain(Var v) const { return prefix_.at(v); }
  const std::vector<Var>& suffix_chain(Var v) const { return suffix_.at(v); }
  const std::vector<Pos>& prefix_lengths(Var v) const { return prefix_len_.at(v); }
  const std::vector<Pos>& suffix_lengths(Var v) const { return suffix_len_.at(v); }

  /// Run^xi(X_i): runs of val(X_i) with 2 <= b <= |X_l| + 1 and |X_l| <= e <= |X_i| - 1.
  std::vector<RunQuintuplet> runs_crossing_variable(Var i);

  /// Maximal g-gapped palindromes of val(X_i) whose gap straddles the split:
  /// left arm ending at j with |X_l| - g < j < |X_l|.
  std::vector<GappedPal> gpals_case3(Var i, Pos g);

  /// Members of gPals^xi(X_i) whose right arm (Arm::Right) or left arm
  /// (Arm::Left) holds the split, including the arm that only touches it.
  std::vector<GPalGroup> gpals_arm_crossing(Var i, Pos g, Arm side);

 private:
  Slp base_;
  std::unique_ptr<LceEngine> lce_;
  std::vector<std::vector<Var>> prefix_, suffix_, rev_prefix_, rev_suffix_;
  std::vector<std::vector<Pos>> prefix_len_, suffix_len_, rev_prefix_len_, rev_suffix_len_;
};

namespace detail {

// Seed index for period d on a chain: the largest length <= d/2, else the first.
inline std::size_t scale_of(const std::vector<Pos>& lens, Wide d) {
  std::size_t t = 0;
  while (t + 1 < lens.size() && 2 * Wide(lens[t + 1]) <= d) ++t;
  return t;
}

enum Combo { kLeftLeft = 0, kRightRight = 1, kLeftRight = 2, kRightLeft = 3 };  // seed side, copy side

struct RunCaseContext {
  Wide l, m;  // |X_l|, |X_i|
  const std::vector<Pos>* left;   // suffix chain lengths of X_l
  const std::vector<Pos>* right;  // prefix chain lengths of X_r

  bool member(Wide b, Wide e) const { return b >= 2 && b <= l + 1 && e >= l && e <= m - 1; }

  // Every run is reported by exactly one (seed side, copy side, seed scale).
  bool canonical(Wide b, Wide e, Wide d, int combo, std::size_t scale) const {
    const std::size_t tl = scale_of(*left, d), tr = scale_of(*right, d);
    const Wide ll = (*left)[tl], lr = (*right)[tr];
    const Wide al = l - b + 1, ar = e - l;
    int owner;
    if (al >= d + ll)
      owner = kLeftLeft;
    else if (ar >= d + lr)
      owner = kRightRight;
    else if (al >= ll && ar >= d)
      owner = kLeftRight;
    else
      owner = kRightLeft;
    const bool left_seed = combo == kLeftLeft || combo == kLeftRight;
    return owner == combo && (left_seed ? tl : tr) == scale;
  }

  // Keeps the members of q that are in Run^xi and owned by (combo, scale).
  void filter(const RunQuintuplet& q, int combo, std::size_t scale, std::vector<RunQuintuplet>& out) const {
    const Wide c = q.c, d1 = q.d1, d2 = q.d2, d3 = q.d3;
    Wide lo = std::max<Wide>({0, ceil_div(d1 - l - 1, c), ceil_div(l - d2, c)});
    Wide hi = std::min<Wide>({Wide(q.k), floor_div(d1 - 2, c) + 1, floor_div(m - 1 - d2, c) + 1});
    if (lo >= hi) return;
    std::vector<Wide> cuts{lo, hi};
    auto add_cut = [&](Wide j) {
      if (j > lo && j < hi) cuts.push_back(j);
    };
    const Wide al0 = l - d1 + 1, ar0 = d2 - l;
    for (const auto* lens : {left, right})
      for (Pos len : *lens) {
        add_cut(ceil_div(2 * Wide(len) - d3, c));
        add_cut(ceil_div(Wide(len) - al0, c));
        add_cut(ceil_div(Wide(len) - ar0, c));
      }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Wide open = -1;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const Wide j = cuts[s];
      const bool keep = canonical(d1 - c * j, d2 + c * j, d3 + c * j, combo, scale);
      if (keep && open < 0) open = j;
      if (!keep && open >= 0) {
        out.push_back(slice(q, open, j));
        open = -1;
      }
    }
    if (open >= 0) out.push_back(slice(q, open, hi));
  }

  static RunQuintuplet slice(const RunQuintuplet& q, Wide from, Wide to) {
    const Pos f = Pos(from);
    return {q.d1 - q.c * f, q.d2 + q.c * f, q.d3 + q.c * f, q.k == 1 ? 1 : q.c, Pos(to - from)};
  }
};

}  // namespace detail

inline std::vector<RunQuintuplet> RegularityEngine::runs_crossing_variable(Var i) {
  using detail::Wide;
  const Production& rule = base_.rule(i);
  if (rule.is_terminal()) return {};
  const Var xl = rule.left(), xr = rule.right();
  const Pos l = base_.length(xl), m = base_.length(i);
  const detail::RunCaseContext ctx{Wide(l), Wide(m), &suffix_len_[xl], &prefix_len_[xr]};
  const detail::View forward(*lce_, i, false), backward(*lce_, i, true);
  ApTable& table = lce_->table();

  std::vector<RunQuintuplet> found;
  for (int seed_side = 0; seed_side < 2; ++seed_side) {
    const bool left_seed = seed_side == 0;
    const auto& vars = left_seed ? suffix_[xl] : prefix_[xr];
    const auto& lens = left_seed ? suffix_len_[xl] : prefix_len_[xr];
    for (std::size_t t = 0; t + 1 < lens.size(); ++t) {
      const Pos plen = lens[t];
      const Pos seed = left_seed ? l - plen + 1 : l + 1;
      const Pos dmin = t == 0 ? 1 : 2 * plen, dmax = 2 * lens[t + 1] - 1;
      for (int copy_right = 0; copy_right < 2; ++copy_right) {
        const int combo = left_seed ? (copy_right ? detail::kLeftRight : detail::kLeftLeft)
                                    : (copy_right ? detail::kRightRight : detail::kRightLeft);
        Wide lo, hi;
        if (copy_right) {
          lo = Wide(seed) + dmin;
          hi = std::min<Wide>(Wide(seed) + dmax, Wide(m) - plen + 1);
        } else {
          lo = std::max<Wide>(1, Wide(seed) - dmax);
          hi = Wide(seed) - dmin;
        }
        if (lo > hi) continue;
        std::vector<ArithProg> aps =
            hi == lo ? std::vector<ArithProg>{table.occurrences(i, vars[t], Pos(lo), Pos(hi))}
                     : local_search(table, i, vars[t], Pos(lo), Ratio{std::uint64_t(hi - lo), plen});
        for (const ArithProg& ap : aps) {
          if (ap.empty()) continue;
          std::vector<RunQuintuplet> got;
          if (copy_right) {
            got = runs_from_ap(forward, seed, plen, ap);
          } else {
            // mirror so that the copies lie to the right of the seed
            const ArithProg mirrored{m - ap.last() - plen + 2, ap.diff, ap.count};
            for (const RunQuintuplet& q : runs_from_ap(backward, m - seed - plen + 2, plen, mirrored))
              got.push_back({m - q.d2 + 1, m - q.d1 + 1, q.d3, q.c, q.k});
          }
          for (const RunQuintuplet& q : got) ctx.filter(q, combo, t, found);
        }
      }
    }
  }

  // a single repetition whose interval also carries a smaller period is not a run
  std::vector<RunQuintuplet> out;
  for (const RunQuintuplet& q : found) {
    bool shadowed = false;
    if (q.k == 1)
      for (const RunQuintuplet& o : found) {
        if (&o == &q) continue;
        if (auto j = o.find(q.d1, q.d2); j && o.d3 + o.c * *j < q.d3) {
          shadowed = true;
          break;
        }
      }
    if (!shadowed) out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Quintuplet guard: total <= kQuintupletFactor * n * ceil(log2 N), n the input
// size (worst observed ratio 0.95, Fibonacci).
inline constexpr Pos kQuintupletFactor = 2;

/// Run^xi lists for every variable of the sentinel-wrapped grammar.
struct CompactRuns {
  Slp grammar;  // input wrapped as $ s $'
  std::vector<std::vector<RunQuintuplet>> per_variable;

  Pos total() const {
    Pos t = 0;
    for (const auto& v : per_variable) t += v.size();
    return t;
  }
};

namespace detail {

// Runs work(engine, i) for every variable of g. Each worker owns an engine,
// since AP-table entries are cached lazily, and takes every threads-th variable;
// results land in per-variable slots, so the output does not depend on threads.
template <typename Work>
void for_each_variable(const Slp& g, unsigned threads, Work work) {
  threads = std::max(1u, std::min<unsigned>(threads, g.size()));
  auto worker = [&](unsigned t) {
    RegularityEngine engine(g);
    for (Var i = 1 + t; i <= g.size(); i += threads) work(engine, i);
  };
  if (threads == 1) return worker(0);
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex guard;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        worker(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

inline CompactRuns all_runs(const Slp& slp, unsigned threads = 1) {
  CompactRuns out{add_sentinels(slp), {}};
  out.per_variable.resize(out.grammar.size() + 1);
  detail::for_each_variable(out.grammar, threads, [&](RegularityEngine& engine, Var i) {
    out.per_variable[i] = engine.runs_crossing_variable(i);
  });
  return out;
}

namespace detail {

// Calls visit(var, offset) for every node of the derivation tree of the root
// whose subtree holds some variable with a non-empty list, where offset is
// the number of symbols left of the node.
template <typename Lists, typename Visit>
void for_each_reporting_node(const Slp& g, const Lists& lists, Visit visit) {
  std::vector<char> live(g.size() + 1, 0);
  for (Var v = 1; v <= g.size(); ++v) {
    const Production& p = g.rule(v);
    live[v] = !lists[v].empty() || (!p.is_terminal() && (live[p.left()] || live[p.right()]));
  }
  std::vector<std::pair<Var, Pos>> stack;
  if (live[g.root()]) stack.push_back({g.root(), 0});
  while (!stack.empty()) {
    const auto [v, off] = stack.back();
    stack.pop_back();
    if (!lists[v].empty()) visit(v, off);
    const Production& p = g.rule(v);
    if (p.is_terminal()) continue;
    if (live[p.right()]) stack.push_back({p.right(), off + g.length(p.left())});
    if (live[p.left()]) stack.push_back({p.left(), off});
  }
}

}  // namespace detail

inline constexpr Pos kDefaultExpansionLimit = 1000000;

/// All runs of s, sorted by (b, e). Throws a domain error past `limit` runs.
inline std::vector<Run> expand_runs(const CompactRuns& cr, Pos limit = kDefaultExpansionLimit) {
  std::vector<Run> out;
  // positions of the wrapped text are one more than those of s
  detail::for_each_reporting_node(cr.grammar, cr.per_variable, [&](Var v, Pos off) {
    for (const RunQuintuplet& q : cr.per_variable[v]) {
      if (out.size() + q.k > limit) throw domain_error("run expansion exceeds limit " + std::to_string(limit));
      for (Pos j = 0; j < q.k; ++j) {
        const Run r = q.at(j);
        out.push_back({r.b + off - 1, r.e + off - 1, r.c});
      }
    }
  });
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw std::logic_error("duplicate run in expansion");
  return out;
}

/// Occurrences of primitively rooted squares: each run <b,e,c> holds e-b+2-2c of them.
inline Pos count_square_occurrences(const CompactRuns& cr) {
  const auto occ = occurrence_counts(cr.grammar, cr.grammar.root());
  unsigned __int128 total = 0;
  for (Var v = 1; v < cr.per_variable.size(); ++v) {
    unsigned __int128 per = 0;
    for (const RunQuintuplet& q : cr.per_variable[v])
      per += static_cast<unsigned __int128>(q.k) * (q.d2 - q.d1 + 2 - 2 * q.d3);
    total += per * occ[v];
  }
  if (total > std::numeric_limits<Pos>::max()) throw domain_error("square count overflows 64 bits");
  return static_cast<Pos>(total);
}

namespace detail {

// Gapped palindromes of a reading W (length M) of val(X_i) split at L whose
// right arm starts at or before L, found from the seed p = W[L-len+1..L]
// (the longest chain seed fitting in the arm's part left of the split) and
// the occurrences x of rev(p) in the left arm. Left arm end j and x are tied
// by x = 2j + g + 1 - L.
class GPalSeedCase {
 public:
  GPalSeedCase(const View& w, Wide split, Wide gap, Wide plen, Wide next, Wide bmin, Wide emax)
      : w_(w), l_(split), g_(gap), plen_(plen), next_(next), bmin_(bmin), emax_(emax) {}

  void single(Wide x, std::vector<GPalGroup>& out) const {
    if (((x + l_ - g_ - 1) & 1) != 0) return;
    const Wide j = (x + l_ - g_ - 1) / 2;
    if (j < 1) return;
    const Wide r0 = j + g_ + 1, arm = l_ - r0 + 1;
    if (arm < plen_ || arm >= next_) return;
    const Wide a = w_.lr(j, r0);
    if (a < arm) return;
    emit(j - a + 1, j + g_ + a, 0, 0, 1, out);
  }

  void family(const ArithProg& ap, std::vector<GPalGroup>& out) const {
    if (ap.count == 1 || Wide(ap.diff) > plen_) {
      for (Pos t = 0; t < ap.count; ++t) single(Wide(ap.first) + Wide(ap.diff) * t, out);
      return;
    }
    const Wide c = ap.diff;
    Wide skip = 0;
    if (((Wide(ap.first) + l_ - g_ - 1) & 1) != 0) {
      if ((c & 1) == 0) return;
      skip = 1;
    }
    const Wide d = (c & 1) ? 2 * c : c, stride = d / c;
    if (skip >= Wide(ap.count)) return;
    const Wide cnt = (Wide(ap.count) - 1 - skip) / stride + 1;
    const Wide x0 = Wide(ap.first) + c * skip;
    if (cnt == 1) return single(x0, out);

    // periodic continuations: right of the copy, left of p, left of the copy, right of p
    const Wide ar = c + w_.fwd(x0, x0 + c) - plen_;
    const Wide bl = c + w_.bwd(l_, l_ - c) - plen_;
    const Wide al = c + w_.bwd(x0 + plen_ - 1, x0 + plen_ - 1 - c) - plen_;
    const Wide br = c + w_.fwd(l_ - plen_ + 1, l_ - plen_ + 1 + c) - plen_;
    const Wide j0 = (x0 + l_ - g_ - 1) / 2, h = d / 2;

    std::vector<Wide> cuts{0, cnt};
    for (Wide cut : {ceil_div(ar - bl, d), ceil_div(br - al, d)})
      for (Wide z : {cut, cut + 1})
        if (z > 0 && z < cnt) cuts.push_back(z);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const Wide lo0 = cuts[s], hi0 = cuts[s + 1] - 1;
      if (lo0 == hi0) {
        single(x0 + d * lo0, out);
        continue;
      }
      const bool inner_u = ar - d * lo0 < bl, ext_v = al + d * lo0 < br;
      struct Eval {
        Wide b, e;
        Wide f[6];
      };
      auto eval = [&](Wide m) {
        const Wide jm = j0 + h * m, inner_len = l_ - plen_ - jm - g_;
        const Wide inner = inner_u ? ar - d * m : bl;
        const Wide ext = ext_v ? al + d * m : br;
        const Wide a = inner_len + plen_ + ext;
        const Wide b = jm - a + 1, e = jm + g_ + a;
        return Eval{b, e, {inner - inner_len, inner_len, next_ - 1 - inner_len - plen_, b - bmin_, emax_ - e, jm - 1}};
      };
      const Eval e0 = eval(lo0), e1 = eval(lo0 + 1);
      Wide lo = lo0, hi = hi0;
      for (int k = 0; k < 6; ++k) {
        const Wide f0 = e0.f[k], slope = e1.f[k] - e0.f[k];
        if (slope == 0) {
          if (f0 < 0) hi = lo - 1;
        } else if (slope > 0) {
          lo = std::max(lo, lo0 + ceil_div(-f0, slope));
        } else {
          hi = std::min(hi, lo0 + floor_div(f0, -slope));
        }
      }
      if (lo > hi) continue;
      const Eval first = eval(lo), second = eval(lo + 1);
      if (lo == hi)
        emit(first.b, first.e, 0, 0, 1, out);
      else
        emit(first.b, first.e, second.b - first.b, second.e - first.e, hi - lo + 1, out);
    }
  }

 private:
  void emit(Wide b, Wide e, Wide db, Wide de, Wide k, std::vector<GPalGroup>& out) const {
    if (b < bmin_ || e > emax_) return;
    out.push_back({Pos(b), Pos(e), std::int64_t(db), std::int64_t(de), Pos(k)});
  }

  const View& w_;
  Wide l_, g_, plen_, next_, bmin_, emax_;
};

}  // namespace detail

inline std::vector<GappedPal> RegularityEngine::gpals_case3(Var i, Pos g) {
  const Production& rule = base_.rule(i);
  std::vector<GappedPal> out;
  if (rule.is_terminal() || g < 2) return out;
  const Pos l = base_.length(rule.left());
  const detail::View forward(*lce_, i, false);
  for (Pos j = l > g - 1 ? l - g + 1 : 1; j < l; ++j)
    if (const Pos a = forward.lr(j, detail::Wide(j) + g + 1); a >= 1) out.push_back({j - a + 1, j + g + a});
  return out;
}

inline std::vector<GPalGroup> RegularityEngine::gpals_arm_crossing(Var i, Pos g, Arm side) {
  using detail::Wide;
  const Production& rule = base_.rule(i);
  std::vector<GPalGroup> out;
  if (rule.is_terminal()) return out;
  const Var xl = rule.left(), xr = rule.right();
  const Pos m = base_.length(i);
  // Arm::Left is the right-arm case on the mirrored reading
  const bool mirrored = side == Arm::Left;
  const Wide split = mirrored ? m - base_.length(xl) : base_.length(xl);
  const detail::View w(*lce_, i, mirrored);
  const auto& vars = mirrored ? rev_suffix_[xr] : rev_prefix_[xl];
  const auto& lens = mirrored ? rev_suffix_len_[xr] : rev_prefix_len_[xl];
  ApTable& table = lce_->table();

  std::vector<GPalGroup> found;
  // the arm that only touches the split, when it starts right after it
  if (!(mirrored && g == 0)) {
    const Wide j = split - Wide(g);
    if (j >= 1)
      if (const Wide a = w.lr(j, j + g + 1); a >= 1)
        found.push_back({Pos(j - a + 1), Pos(j + g + a), 0, 0, 1});
  }
  for (std::size_t t = 0; t + 1 < lens.size(); ++t) {
    const Wide plen = lens[t], next = lens[t + 1];
    const Wide lo = std::max<Wide>(1, split - g - 2 * next + 3);
    const Wide hi = std::min<Wide>(split - g - 2 * plen + 1, Wide(m) - plen + 1);
    if (lo > hi) continue;
    // window in the coordinates of val(X_i)
    const Wide vlo = mirrored ? Wide(m) - hi - plen + 2 : lo, vhi = mirrored ? Wide(m) - lo - plen + 2 : hi;
    std::vector<ArithProg> aps =
        vhi == vlo ? std::vector<ArithProg>{table.occurrences(i, vars[t], Pos(vlo), Pos(vhi))}
                   : local_search(table, i, vars[t], Pos(vlo), Ratio{std::uint64_t(vhi - vlo), Pos(plen)});
    const detail::GPalSeedCase seeds(w, split, g, plen, next, 1, m);
    for (const ArithProg& ap : aps) {
      if (ap.empty()) continue;
      seeds.family(mirrored ? ArithProg{Pos(Wide(m) - ap.last() - plen + 2), ap.diff, ap.count} : ap, found);
    }
  }
  if (!mirrored) return found;
  for (const GPalGroup& q : found) out.push_back({m - q.e0 + 1, m - q.b0 + 1, -q.de, -q.db, q.k});
  return out;
}

/// Per-variable gPals^xi lists of the sentinel-wrapped grammar for one gap length.
struct CompactGPals {
  Slp grammar;  // input wrapped as $ s $'
  Pos gap = 0;
  std::vector<std::vector<GPalGroup>> per_variable;

  Pos total() const {
    Pos t = 0;
    for (const auto& v : per_variable) t += v.size();
    return t;
  }
};

namespace detail {

// Keeps the members with 2 <= b <= l + 1 and l <= e <= m - 1.
inline void clip_group(const GPalGroup& q, Wide l, Wide m, std::vector<GPalGroup>& out) {
  Wide lo = 0, hi = Wide(q.k) - 1;
  auto bound = [&](Wide f0, Wide slope) {  // f0 + slope*j >= 0
    if (slope == 0) {
      if (f0 < 0) hi = lo - 1;
    } else if (slope > 0) {
      lo = std::max(lo, ceil_div(-f0, slope));
    } else {
      hi = std::min(hi, floor_div(f0, -slope));
    }
  };
  bound(Wide(q.b0) - 2, q.db);
  bound(l + 1 - Wide(q.b0), -Wide(q.db));
  bound(Wide(q.e0) - l, q.de);
  bound(m - 1 - Wide(q.e0), -Wide(q.de));
  if (lo > hi) return;
  const GappedPal f = q.at(Pos(lo));
  out.push_back({f.b, f.e, lo == hi ? 0 : q.db, lo == hi ? 0 : q.de, Pos(hi - lo + 1)});
}

}  // namespace detail

inline CompactGPals all_gpals(const Slp& slp, Pos g, unsigned threads = 1) {
  CompactGPals out{add_sentinels(slp), g, {}};
  const Slp& w = out.grammar;
  out.per_variable.resize(w.size() + 1);
  detail::for_each_variable(w, threads, [&](RegularityEngine& engine, Var i) {
    const Production& p = w.rule(i);
    if (p.is_terminal()) return;
    const detail::Wide l = w.length(p.left()), m = w.length(i);
    if (detail::Wide(m) < detail::Wide(g) + 4) return;  // no room for arms and both flanks
    auto& list = out.per_variable[i];
    for (const GappedPal& q : engine.gpals_case3(i, g)) detail::clip_group({q.b, q.e, 0, 0, 1}, l, m, list);
    for (Arm side : {Arm::Right, Arm::Left})
      for (const GPalGroup& q : engine.gpals_arm_crossing(i, g, side)) detail::clip_group(q, l, m, list);
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  });
  return out;
}

/// All maximal g-gapped palindromes of s, sorted. Throws a domain error past `limit`.
inline std::vector<GappedPal> expand_gpals(const CompactGPals& cg, Pos limit = kDefaultExpansionLimit) {
  std::vector<GappedPal> out;
  detail::for_each_reporting_node(cg.grammar, cg.per_variable, [&](Var v, Pos off) {
    for (const GPalGroup& q : cg.per_variable[v]) {
      if (out.size() + q.k > limit)
        throw domain_error("gapped palindrome expansion exceeds limit " + std::to_string(limit));
      for (Pos j = 0; j < q.k; ++j) {
        const GappedPal r = q.at(j);
        out.push_back({r.b + off - 1, r.e + off - 1});
      }
    }
  });
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw std::logic_error("duplicate gapped palindrome in expansion");
  return out;
}

/// Number of maximal g-gapped palindromes in s, without expansion.
inline Pos count_gpals(const CompactGPals& cg) {
  const auto occ = occurrence_counts(cg.grammar, cg.grammar.root());
  unsigned __int128 total = 0;
  for (Var v = 1; v < cg.per_variable.size(); ++v) {
    Pos per = 0;
    for (const GPalGroup& q : cg.per_variable[v]) per += q.k;
    total += static_cast<unsigned __int128>(per) * occ[v];
  }
  if (total > std::numeric_limits<Pos>::max()) throw domain_error("gapped palindrome count overflows 64 bits");
  return static_cast<Pos>(total);
}

}  // namespace slp
