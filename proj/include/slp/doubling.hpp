#pragma once

// Approximately doubling prefix (suffix) variables: a chain Y_1, ..., Y_k of
// prefixes of s with |Y_1| = 1, |Y_k| = N and |Y_j| < |Y_{j+1}| <= 2|Y_j|,
// added to a grammar with O(n) new rules.

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "slp/builder.hpp"
#include "slp/core.hpp"

namespace slp {

struct DoublingChain {
  Slp grammar;              // input rules followed by the new ones; still derives s
  std::vector<Var> vars;    // a_1..a_k
  std::vector<Pos> lengths;
};

enum class Side { Prefix, Suffix };

// Size and height guards, fixed from measurements on random and Fibonacci
// grammars (worst observed: n' - n <= 0.86 (n + lg N), height' <= 0.8 (h + lg N + 1)).
// n' <= kChainSizeRules * n + kChainSizeLog * ceil(log2 N)
// height' <= kChainHeightBase * h + kChainHeightLog * ceil(log2 N)
inline constexpr Pos kChainSizeRules = 3;
inline constexpr Pos kChainSizeLog = 3;
inline constexpr Pos kChainHeightBase = 2;
inline constexpr Pos kChainHeightLog = 2;

inline Pos ceil_log2(Pos n) {
  Pos r = 0;
  while (r < 64 && (Pos{1} << r) < n) ++r;
  return r;
}

namespace detail {

// Walks the derivation tree of one variable of a builder. For Side::Suffix
// every rule is read mirrored, so "position p" means the p-th symbol from the
// right and emitted pairs are flipped back.
class ChainWalker {
 public:
  ChainWalker(GrammarBuilder& g, Var root, Side side) : g_(g), root_(root), mirrored_(side == Side::Suffix) {}

  std::vector<Var> run() {
    const Pos n = g_.length(root_);
    Var y = root_;
    while (!g_.rule(y).is_terminal()) y = first(y);
    std::vector<Var> chain{y};
    Pos p = 1;
    while (p < n) {
      const Pos target = 2 * p;
      const Pos stop = target >= n ? n : walk(p, target);
      y = join(y, segment(p + 1, stop));
      chain.push_back(y);
      p = stop;
    }
    return chain;
  }

 private:
  Var first(Var v) const { return mirrored_ ? g_.rule(v).right() : g_.rule(v).left(); }
  Var second(Var v) const { return mirrored_ ? g_.rule(v).left() : g_.rule(v).right(); }
  Var join(Var a, Var b) { return mirrored_ ? g_.pair(b, a) : g_.pair(a, b); }

  // Descends towards `target` from the deepest node holding both p+1 and
  // target. Returns the last position of the new segment.
  Pos walk(Pos p, Pos target) {
    Var v = root_;
    Pos offset = 0;
    while (!g_.rule(v).is_terminal()) {
      const Pos mid = offset + g_.length(first(v));
      if (target <= mid) {
        v = first(v);
      } else if (p + 1 > mid) {
        offset = mid;
        v = second(v);
      } else {
        break;
      }
    }
    for (;;) {
      const Pos start = offset + 1, end = offset + g_.length(v);
      if (end == target) return target;
      // a repeated label stops the walk unless the segment would be empty
      int& seen = descents_[v];
      if (seen >= 2 && start >= p + 2) return start - 1;
      ++seen;
      const Pos mid = offset + g_.length(first(v));
      if (target <= mid) {
        v = first(v);
      } else {
        offset = mid;
        v = second(v);
      }
    }
  }

  // Maximal subtrees covering [b, e], combined into one balanced variable.
  Var segment(Pos b, Pos e) {
    std::vector<Var> nodes;
    cover(root_, 0, b, e, nodes);
    if (mirrored_) std::reverse(nodes.begin(), nodes.end());
    return g_.balanced(std::move(nodes));
  }

  void cover(Var v, Pos offset, Pos b, Pos e, std::vector<Var>& out) const {
    for (;;) {
      if (b == offset + 1 && e == offset + g_.length(v)) {
        out.push_back(v);
        return;
      }
      const Pos mid = offset + g_.length(first(v));
      if (e <= mid) {
        v = first(v);
      } else if (b > mid) {
        offset = mid;
        v = second(v);
      } else {
        cover(first(v), offset, b, mid, out);
        offset = mid;
        v = second(v);
        b = mid + 1;
      }
    }
  }

  GrammarBuilder& g_;
  Var root_;
  bool mirrored_;
  std::unordered_map<Var, int> descents_;
};

}  // namespace detail

/// Appends the chain for val(root) to `g` and returns its variables, shortest first.
inline std::vector<Var> append_chain(GrammarBuilder& g, Var root, Side side) {
  return detail::ChainWalker(g, root, side).run();
}

inline DoublingChain doubling_chain(const Slp& slp, Side side) {
  GrammarBuilder g(slp);
  std::vector<Var> vars = append_chain(g, slp.root(), side);
  // the last rule must still derive s
  if (g.size() != vars.back() && g.size() != slp.root()) g.append(slp.rule(slp.root()));
  DoublingChain out{g.build(), std::move(vars), {}};
  for (Var v : out.vars) out.lengths.push_back(out.grammar.length(v));
  return out;
}

inline DoublingChain prefix_chain(const Slp& slp) { return doubling_chain(slp, Side::Prefix); }
inline DoublingChain suffix_chain(const Slp& slp) { return doubling_chain(slp, Side::Suffix); }

}  // namespace slp
