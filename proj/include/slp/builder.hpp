#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "slp/core.hpp"

namespace slp {

/// Append-only rule list with cached lengths/heights and hash-consed pairs.
/// Turns into an Slp once complete.
class GrammarBuilder {
 public:
  GrammarBuilder() = default;
  explicit GrammarBuilder(const Slp& base) {
    for (const Production& p : base.rules()) append(p);
  }

  Var size() const noexcept { return static_cast<Var>(rules_.size()); }
  Pos length(Var v) const { return length_.at(v); }
  std::uint32_t height(Var v) const { return height_.at(v); }
  const Production& rule(Var v) const { return rules_.at(v - 1); }

  /// Returns an existing variable with the same right-hand side when there is one.
  Var pair(Var l, Var r) {
    const std::uint64_t key = (std::uint64_t{l} << 32) | r;
    if (auto it = pairs_.find(key); it != pairs_.end()) return it->second;
    return append(Production::pair(l, r));
  }

  /// Always appends, even if an identical rule exists.
  Var append(const Production& p) {
    Pos len = 1;
    std::uint32_t h = 0;
    if (!p.is_terminal()) {
      const Var v = size() + 1;
      if (p.left() >= v || p.right() >= v) throw domain_error("builder: forward reference");
      const Pos a = length_[p.left()], b = length_[p.right()];
      if (a > kMaxLength - b) throw domain_error("builder: length overflow");
      len = a + b;
      h = 1 + std::max(height_[p.left()], height_[p.right()]);
    }
    rules_.push_back(p);
    if (length_.empty()) {
      length_.push_back(0);
      height_.push_back(0);
    }
    length_.push_back(len);
    height_.push_back(h);
    const Var v = size();
    if (!p.is_terminal()) pairs_.try_emplace((std::uint64_t{p.left()} << 32) | p.right(), v);
    return v;
  }

  /// Balanced combination of a non-empty left-to-right sequence.
  Var balanced(std::vector<Var> seq) {
    while (seq.size() > 1) {
      std::vector<Var> next;
      next.reserve((seq.size() + 1) / 2);
      for (std::size_t k = 0; k + 1 < seq.size(); k += 2) next.push_back(pair(seq[k], seq[k + 1]));
      if (seq.size() % 2) next.push_back(seq.back());
      seq = std::move(next);
    }
    return seq.front();
  }

  const std::vector<Production>& rules() const noexcept { return rules_; }
  Slp build() const { return Slp(rules_); }

 private:
  std::vector<Production> rules_;
  std::vector<Pos> length_;
  std::vector<std::uint32_t> height_;
  std::unordered_map<std::uint64_t, Var> pairs_;
};

}  // namespace slp
