#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "slp/core.hpp"
#include "slp/grammar_io.hpp"

namespace slp::test {

// X1->a X2->b X3->X2X2 X4->X1X2 X5->X1X3 X6->X4X3 X7->X5X6 X8->X7X7
inline Slp example_slp() {
  using P = Production;
  return Slp({P::terminal('a'), P::terminal('b'), P::pair(2, 2), P::pair(1, 2), P::pair(1, 3),
              P::pair(4, 3), P::pair(5, 6), P::pair(7, 7)});
}

inline std::string to_string(const Text& t) {
  std::string s;
  for (Symbol c : t) s.push_back(static_cast<char>(c));
  return s;
}

inline Text text(std::string_view s) { return Text(s.begin(), s.end()); }

inline Text random_text(std::mt19937_64& rng, std::size_t n, int sigma) {
  std::uniform_int_distribution<int> d(0, sigma - 1);
  Text t(n);
  for (auto& c : t) c = static_cast<Symbol>('a' + d(rng));
  return t;
}

/// Random text with long periodic stretches, so runs and squares are frequent.
inline Text periodic_text(std::mt19937_64& rng, std::size_t n, int sigma) {
  Text t;
  std::uniform_int_distribution<int> d(0, sigma - 1);
  while (t.size() < n) {
    const std::size_t c = 1 + rng() % 6;
    const std::size_t reps = 1 + rng() % 5;
    Text base(c);
    for (auto& x : base) x = static_cast<Symbol>('a' + d(rng));
    for (std::size_t k = 0; k < c * reps && t.size() < n; ++k) t.push_back(base[k % c]);
  }
  return t;
}

}  // namespace slp::test
