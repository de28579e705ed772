#pragma once

// Match / FirstMismatch / longest-common-extension queries over a grammar,
// answered from the self AP-table without decompression.

#include <algorithm>
#include <functional>
#include <memory>
#include <string>

#include "slp/ap_match.hpp"
#include "slp/builder.hpp"
#include "slp/core.hpp"
#include "slp/regularity_types.hpp"

namespace slp {

/// One grammar holding a base SLP, its mirror image and, for every base
/// variable X_i, the variable Z_i -> X_i X_i^R. Extra rules (doubling chains)
/// may be appended after those.
///
/// Layout: base rules 1..n; X_i^R = n + i; Z_i = 2n + i.
class Universe {
 public:
  using Extension = std::function<void(GrammarBuilder&, const Universe&)>;

  explicit Universe(const Slp& base, const Extension& extend = {}) : base_size_(base.size()) {
    GrammarBuilder b;
    for (const Production& p : base.rules()) b.append(p);
    for (const Production& p : base.rules())
      b.append(p.is_terminal() ? p
                               : Production::pair(p.right() + base_size_, p.left() + base_size_));
    for (Var i = 1; i <= base_size_; ++i) b.append(Production::pair(i, i + base_size_));
    if (extend) extend(b, *this);
    grammar_ = b.build();
  }

  const Slp& grammar() const noexcept { return grammar_; }
  Var base_size() const noexcept { return base_size_; }
  Var base_root() const noexcept { return base_size_; }
  Var mirror(Var i) const noexcept { return i + base_size_; }
  Var with_mirror(Var i) const noexcept { return i + 2 * base_size_; }

 private:
  Var base_size_;
  Slp grammar_;
};

/// Longest-common-extension engine. Construction only lays out the universe;
/// AP-table entries are filled on demand and cached, so queries mutate
/// internal state and an engine must not be shared across threads.
class LceEngine {
 public:
  explicit LceEngine(const Slp& base, const Universe::Extension& extend = {})
      : universe_(std::make_unique<Universe>(base, extend)),
        table_(std::make_unique<ApTable>(universe_->grammar(), universe_->grammar())) {}

  const Universe& universe() const { return *universe_; }
  const Slp& grammar() const { return universe_->grammar(); }
  ApTable& table() { return *table_; }
  Pos text_length() const { return grammar().length(universe_->base_root()); }

  /// k in Occ(X_i, X_j). Variables index the universe (base variables keep their numbers).
  bool match_at(Var i, Var j, Pos k) {
    const Pos li = grammar().length(i), lj = grammar().length(j);
    if (lj > li || k < 1 || k > li - lj + 1)
      throw domain_error("match position " + std::to_string(k) + " out of range");
    return table_->match(i, j, k);
  }

  /// |lcp(X_i[k..|X_i|], X_j)|; requires the suffix to be no longer than X_j.
  Pos first_mismatch(Var i, Var j, Pos k) {
    const Pos li = grammar().length(i), lj = grammar().length(j);
    if (k < 1 || k > li || li - k + 1 > lj)
      throw domain_error("first_mismatch: suffix at " + std::to_string(k) + " longer than pattern");
    return table_->prefix_match(i, j, k);
  }

  /// lcp(X_i[k1..], X_i[k2..]) for any universe variable.
  Pos lce_rr(Var i, Pos k1, Pos k2) {
    const Pos len = grammar().length(i);
    if (k1 < 1 || k2 < 1 || k1 > len || k2 > len)
      throw domain_error("lce position out of range 1.." + std::to_string(len));
    return rr(i, k1, k2);
  }

  /// Extension queries on the whole base text s (length N):
  /// RR = lcp(s[k1..], s[k2..]), LL = lcs(s[..k1], s[..k2]),
  /// LR = lcp(rev(s[..k1]), s[k2..]), RL = lcp(s[k1..], rev(s[..k2])).
  Pos lce_dir(LceMode mode, Pos k1, Pos k2) {
    const Pos n = text_length();
    if (k1 < 1 || k2 < 1 || k1 > n || k2 > n)
      throw domain_error("lce position out of range 1.." + std::to_string(n));
    return within(universe_->base_root(), mode, k1, k2);
  }

  /// Same four modes, restricted to val(X_i) of a base variable.
  ///
  /// All of them are rr-queries on Z_i = X_i X_i^R: position k of X_i^R is
  /// position |X_i| - k + 1 of X_i and sits at |X_i| + k in Z_i.
  Pos within(Var i, LceMode mode, Pos k1, Pos k2) {
    const Pos m = grammar().length(i);
    const Var z = universe_->with_mirror(i);
    switch (mode) {
      case LceMode::RR:
        return std::min(rr(z, k1, k2), m - std::max(k1, k2) + 1);
      case LceMode::LL:
        return rr(z, 2 * m - k1 + 1, 2 * m - k2 + 1);
      case LceMode::LR:
        return std::min({rr(z, k2, 2 * m - k1 + 1), k1, m - k2 + 1});
      case LceMode::RL:
        return std::min({rr(z, k1, 2 * m - k2 + 1), k2, m - k1 + 1});
    }
    return 0;
  }

  /// lcp(X_v[k1..], X_v[k2..]); 0 when a position falls outside X_v.
  Pos rr(Var v, Pos k1, Pos k2) {
    const Pos len = grammar().length(v);
    if (k1 < 1 || k2 < 1 || k1 > len || k2 > len) return 0;
    if (k1 == k2) return len - k1 + 1;
    if (k1 > k2) std::swap(k1, k2);
    // compare X_v[k1..k1+span-1] node by node against X_v[k2..]
    const Pos span = len - k2 + 1;
    const auto cover = decompose_interval(grammar(), v, {k1, k1 + span - 1});
    for (const NodeLocator& node : cover) {
      const Pos at = k2 + (node.position - k1);
      if (!table_->match(v, node.label, at)) return (node.position - k1) + table_->prefix_match(v, node.label, at);
    }
    return span;
  }

 private:
  std::unique_ptr<Universe> universe_;
  std::unique_ptr<ApTable> table_;
};

}  // namespace slp
