#pragma once

// SLP text format, grammar builders and grammar-level transformations.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "slp/core.hpp"

namespace slp {

using Text = std::vector<Symbol>;

inline Text to_text(std::string_view bytes) {
  Text t;
  t.reserve(bytes.size());
  for (unsigned char ch : bytes) t.push_back(ch);
  return t;
}

/// Symbols of val(X_i)[iv]; codes above 255 cannot be represented as bytes.
inline Text expand(const Slp& slp, Var i, Interval iv) {
  check_interval(slp, i, iv);
  symbols_read.fetch_add(iv.length(), std::memory_order_relaxed);
  Text out;
  out.reserve(iv.length());
  struct Frame {
    Var v;
    Pos offset;
  };
  std::vector<Frame> stack{{i, 0}};
  while (!stack.empty()) {
    auto [v, off] = stack.back();
    stack.pop_back();
    const Pos len = slp.length(v);
    if (off + len < iv.b || off + 1 > iv.e) continue;
    const Production& p = slp.rule(v);
    if (p.is_terminal()) {
      out.push_back(p.symbol());
      continue;
    }
    stack.push_back({p.right(), off + slp.length(p.left())});
    stack.push_back({p.left(), off});
  }
  return out;
}

inline Text expand(const Slp& slp) { return expand(slp, slp.root(), {1, slp.length()}); }
inline Text expand(const Slp& slp, Var i) { return expand(slp, i, {1, slp.length(i)}); }

// ---------------------------------------------------------------------------
// Text format
//
//   SLP v1
//   n=<count>
//   <i> T <code>        or        <i> N <l> <r>
//
// One rule per line in increasing i; every line ends with LF.

inline std::string serialize(const Slp& slp) {
  std::string out = "SLP v1\nn=" + std::to_string(slp.size()) + "\n";
  for (Var i = 1; i <= slp.size(); ++i) {
    const Production& p = slp.rule(i);
    out += std::to_string(i);
    if (p.is_terminal()) {
      out += " T " + std::to_string(p.symbol());
    } else {
      out += " N " + std::to_string(p.left()) + " " + std::to_string(p.right());
    }
    out += '\n';
  }
  return out;
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::string_view data) : data_(data) {}

  bool next(std::string_view& line) {
    if (pos_ >= data_.size()) return false;
    const auto nl = data_.find('\n', pos_);
    const auto end = nl == std::string_view::npos ? data_.size() : nl;
    line = data_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++number_;
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

template <typename T>
bool parse_uint(std::string_view tok, T& value) {
  if (tok.empty() || (tok.size() > 1 && tok[0] == '0')) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto sp = line.find(' ', pos);
    const auto end = sp == std::string_view::npos ? line.size() : sp;
    toks.push_back(line.substr(pos, end - pos));
    if (sp == std::string_view::npos) break;
    pos = sp + 1;
  }
  return toks;
}

}  // namespace detail

inline Slp parse_slp(std::string_view bytes) {
  detail::LineReader reader(bytes);
  std::string_view line;
  auto syntax = [&](const std::string& what) {
    return format_error("line " + std::to_string(reader.number()) + ": " + what);
  };
  if (!reader.next(line) || line != "SLP v1") throw syntax("expected header 'SLP v1'");
  if (!reader.next(line) || !line.starts_with("n=")) throw syntax("expected 'n=<count>'");
  Var n = 0;
  if (!detail::parse_uint(line.substr(2), n)) throw syntax("bad rule count");
  if (n == 0) throw format_error("no root");
  std::vector<Production> rules;
  rules.reserve(std::min<std::size_t>(n, bytes.size() / 6 + 1));
  for (Var i = 1; i <= n; ++i) {
    if (!reader.next(line))
      throw format_error("line " + std::to_string(reader.number() + 1) + ": missing rule " + std::to_string(i));
    const auto toks = detail::split_spaces(line);
    Var idx = 0;
    if (toks.empty() || !detail::parse_uint(toks[0], idx) || idx != i)
      throw syntax("expected rule index " + std::to_string(i));
    if (toks.size() == 3 && toks[1] == "T") {
      std::uint32_t code = 0;
      if (!detail::parse_uint(toks[2], code) || code > 65535) throw syntax("bad symbol code");
      rules.push_back(Production::terminal(static_cast<Symbol>(code)));
    } else if (toks.size() == 4 && toks[1] == "N") {
      Var l = 0, r = 0;
      if (!detail::parse_uint(toks[2], l) || !detail::parse_uint(toks[3], r) || l == 0 || r == 0)
        throw syntax("bad child index");
      rules.push_back(Production::pair(l, r));
    } else {
      throw syntax("malformed rule");
    }
  }
  if (reader.next(line))
    throw syntax("trailing content after rule " + std::to_string(n));
  return Slp(std::move(rules));
}

// ---------------------------------------------------------------------------
// Builders

namespace detail {

/// Appends rules with hash-consing of identical right-hand sides.
class RuleInterner {
 public:
  Var terminal(Symbol s) {
    auto [it, fresh] = terminals_.try_emplace(s, 0);
    if (fresh) {
      rules_.push_back(Production::terminal(s));
      it->second = static_cast<Var>(rules_.size());
    }
    return it->second;
  }
  Var pair(Var l, Var r) {
    const std::uint64_t key = (std::uint64_t{l} << 32) | r;
    auto [it, fresh] = pairs_.try_emplace(key, 0);
    if (fresh) {
      rules_.push_back(Production::pair(l, r));
      it->second = static_cast<Var>(rules_.size());
    }
    return it->second;
  }
  std::vector<Production>& rules() { return rules_; }

 private:
  std::vector<Production> rules_;
  std::map<Symbol, Var> terminals_;
  std::unordered_map<std::uint64_t, Var> pairs_;
};

/// Keeps only the rules reachable from `root`, renumbered in increasing order.
inline std::vector<Production> prune(const std::vector<Production>& rules, Var root) {
  std::vector<char> live(rules.size() + 1, 0);
  live[root] = 1;
  for (Var i = root; i >= 1; --i) {
    if (!live[i]) continue;
    const Production& p = rules[i - 1];
    if (!p.is_terminal()) live[p.left()] = live[p.right()] = 1;
  }
  std::vector<Var> remap(rules.size() + 1, 0);
  std::vector<Production> out;
  for (Var i = 1; i <= root; ++i) {
    if (!live[i]) continue;
    const Production& p = rules[i - 1];
    out.push_back(p.is_terminal() ? p : Production::pair(remap[p.left()], remap[p.right()]));
    remap[i] = static_cast<Var>(out.size());
  }
  return out;
}

/// Balanced pairwise merge of a variable sequence; returns the combined variable.
inline Var merge_balanced(RuleInterner& in, std::vector<Var> seq) {
  while (seq.size() > 1) {
    std::vector<Var> next;
    next.reserve((seq.size() + 1) / 2);
    for (std::size_t k = 0; k + 1 < seq.size(); k += 2) next.push_back(in.pair(seq[k], seq[k + 1]));
    if (seq.size() % 2) next.push_back(seq.back());
    seq = std::move(next);
  }
  return seq.front();
}

}  // namespace detail

/// Bottom-up pairwise merging with hash-consing; height <= ceil(log2 |text|).
inline Slp build_balanced_slp(std::span<const Symbol> text) {
  if (text.empty()) throw domain_error("cannot build an SLP for empty text");
  detail::RuleInterner in;
  std::vector<Var> seq;
  seq.reserve(text.size());
  for (Symbol s : text) seq.push_back(in.terminal(s));
  const Var root = detail::merge_balanced(in, std::move(seq));
  return Slp(detail::prune(in.rules(), root));
}

/// Random split points with hash-consing; produces irregular, deeper trees.
inline Slp build_random_slp(std::span<const Symbol> text, std::uint64_t seed) {
  if (text.empty()) throw domain_error("cannot build an SLP for empty text");
  detail::RuleInterner in;
  std::mt19937_64 rng(seed);
  // iterative post-order over [lo, hi)
  struct Frame {
    std::size_t lo, hi, mid;
    int stage;
  };
  std::vector<Frame> stack{{0, text.size(), 0, 0}};
  std::vector<Var> results;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.hi - f.lo == 1) {
      results.push_back(in.terminal(text[f.lo]));
      stack.pop_back();
      continue;
    }
    if (f.stage == 0) {
      std::uniform_int_distribution<std::size_t> pick(f.lo + 1, f.hi - 1);
      f.mid = pick(rng);
      f.stage = 1;
      const Frame child{f.lo, f.mid, 0, 0};
      stack.push_back(child);
    } else if (f.stage == 1) {
      f.stage = 2;
      const Frame child{f.mid, f.hi, 0, 0};
      stack.push_back(child);
    } else {
      const Var r = results.back();
      results.pop_back();
      const Var l = results.back();
      results.pop_back();
      results.push_back(in.pair(l, r));
      stack.pop_back();
    }
  }
  return Slp(detail::prune(in.rules(), results.back()));
}

// ---------------------------------------------------------------------------
// Derived grammars

/// Same rule count; every X_i -> X_l X_r becomes X_i -> X_r X_l.
inline Slp reverse_slp(const Slp& slp) {
  std::vector<Production> rules;
  rules.reserve(slp.size());
  for (const Production& p : slp.rules())
    rules.push_back(p.is_terminal() ? p : Production::pair(p.right(), p.left()));
  return Slp(std::move(rules));
}

/// Grammar for s[iv]: the interval's cover, recombined as a balanced tree over the
/// original rules. At most n + 2h rules; unreachable rules are dropped.
inline Slp substring_slp(const Slp& slp, Interval iv) {
  const auto cover = decompose_interval(slp, iv);
  std::vector<Production> rules = slp.rules();
  std::vector<Var> seq;
  for (const auto& node : cover) seq.push_back(node.label);
  while (seq.size() > 1) {
    std::vector<Var> next;
    for (std::size_t k = 0; k + 1 < seq.size(); k += 2) {
      rules.push_back(Production::pair(seq[k], seq[k + 1]));
      next.push_back(static_cast<Var>(rules.size()));
    }
    if (seq.size() % 2) next.push_back(seq.back());
    seq = std::move(next);
  }
  return Slp(detail::prune(rules, seq.front()));
}

/// Rules of a, then rules of b shifted by |a|, then the root pair.
inline Slp concat_slps(const Slp& a, const Slp& b) {
  if (a.length() > kMaxLength - b.length()) throw domain_error("concatenated length overflows");
  std::vector<Production> rules = a.rules();
  const Var shift = a.size();
  for (const Production& p : b.rules())
    rules.push_back(p.is_terminal() ? p : Production::pair(p.left() + shift, p.right() + shift));
  rules.push_back(Production::pair(a.root(), b.root() + shift));
  return Slp(std::move(rules));
}

/// Grammar for $ s $' with $ = 256 and $' = 257; four extra rules.
inline Slp add_sentinels(const Slp& slp) {
  if (slp.length() > kMaxLength - 2) throw domain_error("sentinel-wrapped length overflows");
  std::vector<Production> rules = slp.rules();
  const Var n = slp.size();
  rules.push_back(Production::terminal(kSentinelLeft));     // n+1
  rules.push_back(Production::pair(n + 1, n));              // n+2
  rules.push_back(Production::terminal(kSentinelRight));    // n+3
  rules.push_back(Production::pair(n + 2, n + 3));          // n+4
  return Slp(std::move(rules));
}

/// The Fibonacci grammar X1 -> b, X2 -> a, X_i -> X_{i-1} X_{i-2}.
inline Slp fibonacci_slp(Var k) {
  if (k < 1) throw domain_error("fibonacci grammar needs k >= 1");
  std::vector<Production> rules{Production::terminal('b')};
  if (k >= 2) rules.push_back(Production::terminal('a'));
  for (Var i = 3; i <= k; ++i) rules.push_back(Production::pair(i - 1, i - 2));
  return Slp(std::move(rules));
}

}  // namespace slp
