#pragma once

// Counting runs, square occurrences and gapped palindromes of a substring
// s[b..e] from the compact representations alone.
//
// A run of s[b..e] is a run <b', e', c> of s clipped to [b, e] that keeps
// length >= 2c; a gapped palindrome of s[b..e] is one of s whose left arm end
// j satisfies b <= j <= e - g - 1, with arms clipped to the tighter side.

#include <optional>
#include <vector>

#include "slp/core.hpp"
#include "slp/regularities.hpp"

namespace slp {

/// inside: designated at a node lying within the interval; spanning: designated
/// higher up but contained in the interval; truncated: cut by an interval end.
struct CountBreakdown {
  Pos inside = 0;
  Pos spanning = 0;
  Pos truncated = 0;

  Pos total() const { return inside + spanning + truncated; }
};

struct IntervalCountReport {
  Interval interval;
  std::optional<CountBreakdown> runs;
  std::optional<CountBreakdown> squares;
  std::optional<CountBreakdown> gpals;
};

namespace detail {

using UWide = unsigned __int128;

inline Pos narrow_count(UWide v, const char* what) {
  if (v > std::numeric_limits<Pos>::max()) throw domain_error(std::string(what) + " count overflows 64 bits");
  return static_cast<Pos>(v);
}

// Indices j in [lo, hi] with f0 + f1*j >= 0, narrowed in place.
inline void keep_nonnegative(Wide f0, Wide f1, Wide& lo, Wide& hi) {
  if (f1 == 0) {
    if (f0 < 0) hi = lo - 1;
  } else if (f1 > 0) {
    lo = std::max(lo, ceil_div(-f0, f1));
  } else {
    hi = std::min(hi, floor_div(f0, -f1));
  }
}

struct Tally {
  UWide inside = 0, spanning = 0, truncated = 0;
  void add_to(CountBreakdown& out, const char* what) const {
    out.inside = narrow_count(inside, what);
    out.spanning = narrow_count(spanning, what);
    out.truncated = narrow_count(truncated, what);
  }
};

// Visits the wrapped grammar's derivation tree against target [tb, te]:
// whole(v) for maximal nodes inside the target, partial(v, off) for nodes
// overlapping it without being inside.
template <typename Whole, typename Partial>
void walk_overlap(const Slp& g, Pos tb, Pos te, Whole whole, Partial partial) {
  std::vector<std::pair<Var, Pos>> stack{{g.root(), 0}};
  while (!stack.empty()) {
    const auto [v, off] = stack.back();
    stack.pop_back();
    const Pos b = off + 1, e = off + g.length(v);
    if (e < tb || b > te) continue;
    if (tb <= b && e <= te) {
      whole(v);
      continue;
    }
    partial(v, off);
    const Production& p = g.rule(v);
    if (p.is_terminal()) continue;
    stack.push_back({p.right(), off + g.length(p.left())});
    stack.push_back({p.left(), off});
  }
}

// Clipped runs of one quintuplet. shift maps node coordinates to s.
inline void tally_quintuplet(const RunQuintuplet& q, Wide shift, Wide b, Wide e, Tally& runs, Tally& squares) {
  const Wide c = q.c, d1 = Wide(q.d1) + shift, d2 = Wide(q.d2) + shift, d3 = q.d3;
  // member j: [d1 - c j, d2 + c j], period d3 + c j
  const Wide cut_left = floor_div(d1 - b, c) + 1;   // first j starting before b
  const Wide cut_right = floor_div(e - d2, c) + 1;  // first j ending after e
  std::vector<Wide> cuts{0, Wide(q.k)};
  for (Wide z : {cut_left, cut_right})
    if (z > 0 && z < Wide(q.k)) cuts.push_back(z);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const Wide lo0 = cuts[s], hi0 = cuts[s + 1] - 1;
    if (lo0 > hi0) continue;
    const bool clip_l = lo0 >= cut_left, clip_r = lo0 >= cut_right;
    // clipped length minus twice the period, as f0 + f1 j
    const Wide l0 = (clip_r ? e : d2) - (clip_l ? b : d1) + 1 - 2 * d3;
    const Wide l1 = (clip_r ? 0 : c) + (clip_l ? 0 : c) - 2 * c;
    Wide lo = lo0, hi = hi0;
    keep_nonnegative(l0, l1, lo, hi);
    if (lo > hi) continue;
    const Wide cnt = hi - lo + 1;
    // sum over j in [lo, hi] of (l0 + l1 j + 1)
    const Wide sq = cnt * (l0 + 1) + l1 * (lo + hi) * cnt / 2;
    Tally& r = runs;
    Tally& sqt = squares;
    if (clip_l || clip_r) {
      r.truncated += UWide(cnt);
      sqt.truncated += UWide(sq);
    } else {
      r.spanning += UWide(cnt);
      sqt.spanning += UWide(sq);
    }
  }
}

// Palindromes of one group whose left arm end lies in [b, e - g - 1].
inline void tally_group(const GPalGroup& q, Wide shift, Wide g, Wide b, Wide e, Tally& pals) {
  Wide lo = 0, hi = Wide(q.k) - 1;
  const Wide b0 = Wide(q.b0) + shift, e0 = Wide(q.e0) + shift;
  // 2j = B + E - g - 1
  const Wide c0 = b0 + e0 - g - 1, c1 = Wide(q.db) + q.de;
  keep_nonnegative(c0 - 2 * b, c1, lo, hi);
  keep_nonnegative(2 * (e - g - 1) - c0, -c1, lo, hi);
  if (lo > hi) return;
  Wide ilo = lo, ihi = hi;
  keep_nonnegative(b0 - b, q.db, ilo, ihi);
  keep_nonnegative(e - e0, -Wide(q.de), ilo, ihi);
  const Wide all = hi - lo + 1, in = ilo > ihi ? 0 : ihi - ilo + 1;
  pals.spanning += UWide(in);
  pals.truncated += UWide(all - in);
}

inline void check_range(const Slp& slp, Interval iv) { check_interval(slp, slp.root(), iv); }

}  // namespace detail

/// Runs and square occurrences of s[iv.b..iv.e]; cr = all_runs(slp).
inline IntervalCountReport count_runs_and_squares_in(const Slp& slp, const CompactRuns& cr, Interval iv) {
  using detail::UWide;
  using detail::Wide;
  detail::check_range(slp, iv);
  const Slp& g = cr.grammar;
  // per-variable totals over the whole derivation subtree
  std::vector<UWide> runs_below(g.size() + 1, 0), squares_below(g.size() + 1, 0);
  for (Var v = 1; v <= g.size(); ++v) {
    for (const RunQuintuplet& q : cr.per_variable[v]) {
      runs_below[v] += q.k;
      squares_below[v] += UWide(q.k) * (q.d2 - q.d1 + 2 - 2 * q.d3);
    }
    const Production& p = g.rule(v);
    if (p.is_terminal()) continue;
    runs_below[v] += runs_below[p.left()] + runs_below[p.right()];
    squares_below[v] += squares_below[p.left()] + squares_below[p.right()];
  }
  detail::Tally runs, squares;
  // wrapped text is $ s $', so s[k] sits at k + 1
  detail::walk_overlap(
      g, iv.b + 1, iv.e + 1,
      [&](Var v) {
        runs.inside += runs_below[v];
        squares.inside += squares_below[v];
      },
      [&](Var v, Pos off) {
        for (const RunQuintuplet& q : cr.per_variable[v])
          detail::tally_quintuplet(q, Wide(off) - 1, iv.b, iv.e, runs, squares);
      });
  IntervalCountReport out{iv, CountBreakdown{}, CountBreakdown{}, std::nullopt};
  runs.add_to(*out.runs, "run");
  squares.add_to(*out.squares, "square");
  return out;
}

/// Maximal g-gapped palindromes of s[iv.b..iv.e]; cg = all_gpals(slp, g).
inline IntervalCountReport count_gpals_report(const Slp& slp, const CompactGPals& cg, Interval iv) {
  using detail::UWide;
  using detail::Wide;
  detail::check_range(slp, iv);
  const Slp& g = cg.grammar;
  std::vector<UWide> below(g.size() + 1, 0);
  for (Var v = 1; v <= g.size(); ++v) {
    for (const GPalGroup& q : cg.per_variable[v]) below[v] += q.k;
    const Production& p = g.rule(v);
    if (!p.is_terminal()) below[v] += below[p.left()] + below[p.right()];
  }
  detail::Tally pals;
  detail::walk_overlap(
      g, iv.b + 1, iv.e + 1, [&](Var v) { pals.inside += below[v]; },
      [&](Var v, Pos off) {
        for (const GPalGroup& q : cg.per_variable[v])
          detail::tally_group(q, Wide(off) - 1, cg.gap, iv.b, iv.e, pals);
      });
  IntervalCountReport out{iv, std::nullopt, std::nullopt, CountBreakdown{}};
  pals.add_to(*out.gpals, "gapped palindrome");
  return out;
}

inline Pos count_runs_in(const Slp& slp, const CompactRuns& cr, Interval iv) {
  return count_runs_and_squares_in(slp, cr, iv).runs->total();
}

inline Pos count_squares_in(const Slp& slp, const CompactRuns& cr, Interval iv) {
  return count_runs_and_squares_in(slp, cr, iv).squares->total();
}

inline Pos count_gpals_in(const Slp& slp, const CompactGPals& cg, Interval iv) {
  return count_gpals_report(slp, cg, iv).gpals->total();
}

}  // namespace slp
