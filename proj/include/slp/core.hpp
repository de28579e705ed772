#pragma once

// Straight-line programs: representation, validation and derivation-tree
// navigation. Positions are 1-based throughout.

#include <atomic>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace slp {

using Pos = std::uint64_t;
using Var = std::uint32_t;
using Symbol = std::uint16_t;

inline constexpr Pos kMaxLength = (Pos{1} << 63) - 1;

/// Symbols of derived text handed out so far by char_at, expand and the oracle's
/// decompress. Compressed-domain algorithms never touch it.
inline std::atomic<Pos> symbols_read{0};
inline constexpr Symbol kSentinelLeft = 256;
inline constexpr Symbol kSentinelRight = 257;

/// Failure category, used by the CLI to pick an exit code.
enum class ErrorKind { Domain, Format };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error domain_error(const std::string& what) { return Error(ErrorKind::Domain, what); }
inline Error format_error(const std::string& what) { return Error(ErrorKind::Format, what); }

class Production {
 public:
  Production() = default;

  static Production terminal(Symbol symbol) {
    Production p;
    p.symbol_ = symbol;
    return p;
  }
  static Production pair(Var left, Var right) {
    Production p;
    p.left_ = left;
    p.right_ = right;
    return p;
  }

  bool is_terminal() const noexcept { return left_ == 0; }
  Symbol symbol() const noexcept { return symbol_; }
  Var left() const noexcept { return left_; }
  Var right() const noexcept { return right_; }

  friend bool operator==(const Production&, const Production&) = default;

 private:
  Var left_ = 0;
  Var right_ = 0;
  Symbol symbol_ = 0;
};

struct Interval {
  Pos b = 1;
  Pos e = 1;
  Pos length() const noexcept { return e - b + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A node of a derivation tree: its variable and the position of its first leaf.
struct NodeLocator {
  Var label = 0;
  Pos position = 1;
  friend bool operator==(const NodeLocator&, const NodeLocator&) = default;
};

struct Violation {
  Var rule = 0;  // 0 when the violation is not tied to a rule
  std::string message;
};

/// Checks the structural invariants of a rule list. Empty result means valid.
inline std::vector<Violation> validate(const std::vector<Production>& rules) {
  std::vector<Violation> out;
  if (rules.empty()) {
    out.push_back({0, "no root"});
    return out;
  }
  std::vector<Pos> len(rules.size() + 1, 0);
  for (Var i = 1; i <= rules.size(); ++i) {
    const Production& p = rules[i - 1];
    if (p.is_terminal()) {
      len[i] = 1;
      continue;
    }
    if (p.left() >= i || p.right() >= i || p.right() == 0) {
      out.push_back({i, "forward reference at rule " + std::to_string(i)});
      continue;
    }
    const Pos a = len[p.left()], b = len[p.right()];
    if (a == 0 || b == 0) {
      // an earlier violation already poisoned a child
      out.push_back({i, "invalid child at rule " + std::to_string(i)});
      continue;
    }
    if (a > kMaxLength - b) {
      out.push_back({i, "length overflow at rule " + std::to_string(i)});
      continue;
    }
    len[i] = a + b;
  }
  return out;
}

class Slp {
 public:
  Slp() = default;

  /// Builds a validated SLP; throws a format error listing every violation.
  explicit Slp(std::vector<Production> rules) : rules_(std::move(rules)) {
    auto violations = validate(rules_);
    if (!violations.empty()) {
      std::string msg;
      for (const auto& v : violations) {
        if (!msg.empty()) msg += "; ";
        msg += v.message;
      }
      throw format_error(msg);
    }
    length_.assign(rules_.size() + 1, 0);
    height_.assign(rules_.size() + 1, 0);
    for (Var i = 1; i <= rules_.size(); ++i) {
      const Production& p = rules_[i - 1];
      if (p.is_terminal()) {
        length_[i] = 1;
      } else {
        length_[i] = length_[p.left()] + length_[p.right()];
        height_[i] = 1 + std::max(height_[p.left()], height_[p.right()]);
      }
    }
  }

  Var size() const noexcept { return static_cast<Var>(rules_.size()); }
  Var root() const noexcept { return size(); }
  Pos length() const { return length_.at(root()); }
  std::uint32_t height() const { return height_.at(root()); }

  const Production& rule(Var i) const {
    check_var(i);
    return rules_[i - 1];
  }
  Pos length(Var i) const {
    check_var(i);
    return length_[i];
  }
  std::uint32_t height(Var i) const {
    check_var(i);
    return height_[i];
  }
  const std::vector<Production>& rules() const noexcept { return rules_; }

  void check_var(Var i) const {
    if (i == 0 || i > rules_.size())
      throw domain_error("variable index " + std::to_string(i) + " out of range");
  }

  friend bool operator==(const Slp& a, const Slp& b) { return a.rules_ == b.rules_; }

 private:
  std::vector<Production> rules_;
  std::vector<Pos> length_;
  std::vector<std::uint32_t> height_;
};

struct Metrics {
  Pos length = 0;
  std::uint32_t height = 0;
};

inline Metrics metrics(const Slp& slp, Var i) { return {slp.length(i), slp.height(i)}; }

inline void check_interval(const Slp& slp, Var i, Interval iv) {
  if (iv.b < 1 || iv.b > iv.e || iv.e > slp.length(i))
    throw domain_error("interval [" + std::to_string(iv.b) + "," + std::to_string(iv.e) +
                       "] out of range 1.." + std::to_string(slp.length(i)));
}

namespace detail {

// Uncounted single-symbol probe used inside the algorithms; u must be in range.
inline Symbol symbol_at(const Slp& slp, Var i, Pos u) {
  for (;;) {
    const Production& p = slp.rule(i);
    if (p.is_terminal()) return p.symbol();
    const Pos left = slp.length(p.left());
    if (u <= left) {
      i = p.left();
    } else {
      u -= left;
      i = p.right();
    }
  }
}

}  // namespace detail

/// val(X_i)[u] by length-guided descent.
inline Symbol char_at(const Slp& slp, Var i, Pos u) {
  if (u < 1 || u > slp.length(i))
    throw domain_error("position " + std::to_string(u) + " out of range 1.." +
                       std::to_string(slp.length(i)));
  symbols_read.fetch_add(1, std::memory_order_relaxed);
  return detail::symbol_at(slp, i, u);
}

/// Lowest common ancestor of leaves iv.b and iv.e in the derivation tree of X_i.
inline NodeLocator crossing_node(const Slp& slp, Var i, Interval iv) {
  check_interval(slp, i, iv);
  Pos offset = 0;  // leaves to the left of the current node
  for (;;) {
    const Production& p = slp.rule(i);
    if (p.is_terminal()) break;
    const Pos left = slp.length(p.left());
    if (iv.e - offset <= left) {
      i = p.left();
    } else if (iv.b - offset > left) {
      offset += left;
      i = p.right();
    } else {
      break;
    }
  }
  return {i, offset + 1};
}

namespace detail {

inline void cover(const Slp& slp, Var v, Pos offset, Pos b, Pos e, std::vector<NodeLocator>& out) {
  // [b,e] is given in coordinates of the whole tree and lies inside v's span
  for (;;) {
    if (b == offset + 1 && e == offset + slp.length(v)) {
      out.push_back({v, offset + 1});
      return;
    }
    const Production& p = slp.rule(v);
    const Pos mid = offset + slp.length(p.left());
    if (e <= mid) {
      v = p.left();
    } else if (b > mid) {
      offset = mid;
      v = p.right();
    } else {
      cover(slp, p.left(), offset, b, mid, out);
      offset = mid;
      v = p.right();
      b = mid + 1;
    }
  }
}

}  // namespace detail

/// Maximal subtree roots of T_i covering exactly iv, left to right; at most 2*height(X_i) nodes.
inline std::vector<NodeLocator> decompose_interval(const Slp& slp, Var i, Interval iv) {
  check_interval(slp, i, iv);
  std::vector<NodeLocator> out;
  detail::cover(slp, i, 0, iv.b, iv.e, out);
  return out;
}

inline std::vector<NodeLocator> decompose_interval(const Slp& slp, Interval iv) {
  return decompose_interval(slp, slp.root(), iv);
}

/// Number of nodes labelled X_j in the derivation tree of X_root, for every j.
/// Counts saturate at the maximum representable value.
inline std::vector<Pos> occurrence_counts(const Slp& slp, Var root) {
  slp.check_var(root);
  std::vector<Pos> count(slp.size() + 1, 0);
  count[root] = 1;
  for (Var i = root; i >= 1; --i) {
    if (count[i] == 0) continue;
    const Production& p = slp.rule(i);
    if (p.is_terminal()) continue;
    for (Var c : {p.left(), p.right()}) {
      const Pos add = count[i];
      count[c] = count[c] > std::numeric_limits<Pos>::max() - add ? std::numeric_limits<Pos>::max()
                                                                    : count[c] + add;
    }
  }
  return count;
}

}  // namespace slp
