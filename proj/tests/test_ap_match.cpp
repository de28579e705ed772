#include <gtest/gtest.h>

#include <set>

#include "slp/ap_match.hpp"
#include "slp/grammar_io.hpp"
#include "slp/oracle.hpp"
#include "support.hpp"

using namespace slp;
using slp::test::example_slp;

namespace {

std::set<Pos> as_set(const ArithProg& ap) {
  std::set<Pos> s;
  for (Pos j = 0; j < ap.count; ++j) s.insert(ap.term(j));
  return s;
}

// crossing occurrences of val(y) in val(x), straight from the definition
std::set<Pos> naive_entry(const Slp& text, Var x, const Slp& pat, Var y) {
  std::set<Pos> out;
  const Production& p = text.rule(x);
  if (p.is_terminal()) return out;
  const Pos split = text.length(p.left());
  const Text tx = expand(text, x), ty = expand(pat, y);
  if (ty.size() < 2) return out;
  for (Pos u : oracle::naive_occ(tx, ty))
    if (u <= split && u + ty.size() - 1 > split) out.insert(u);
  return out;
}

void check_entries(const Slp& text, const Slp& pat) {
  ApTable table(text, pat);
  for (Var x = 1; x <= text.size(); ++x)
    for (Var y = 1; y <= pat.size(); ++y)
      ASSERT_EQ(as_set(table.entry(x, y)), naive_entry(text, x, pat, y)) << "x=" << x << " y=" << y;
}

}  // namespace

TEST(ApMatch, ExampleOccurrencesOfBb) {
  const Slp g = example_slp();
  const Slp bb = build_balanced_slp(to_text("bb"));
  const Slp u = concat_slps(g, bb);  // variables of g keep their numbers
  ApTable table(u, u);
  const Var y = u.size() - 1;        // root of the bb grammar inside u
  ASSERT_EQ(test::to_string(expand(u, y)), "bb");
  std::vector<Pos> got;
  for (Pos k = 1; k <= 13; ++k)
    if (table.match(g.root(), y, k)) got.push_back(k);
  EXPECT_EQ(got, oracle::naive_occ(to_text("abbabbbabbabbb"), to_text("bb")));
  EXPECT_EQ(got, (std::vector<Pos>{2, 5, 6, 9, 12, 13}));
}

TEST(ApMatch, ExampleMatchQueries) {
  const Slp g = example_slp();
  ApTable table(g, g);
  EXPECT_TRUE(table.match(8, 6, 4));
  EXPECT_FALSE(table.match(8, 6, 1));
  EXPECT_EQ(table.prefix_match(8, 7, 8), 7u);
  EXPECT_EQ(table.prefix_match(8, 6, 12), 0u);
}

TEST(ApMatch, SelfTableEntriesMatchDefinition) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 60; ++round) {
    const Text t = round % 2 ? test::periodic_text(rng, 1 + rng() % 120, 2)
                             : test::random_text(rng, 1 + rng() % 120, 2);
    const Slp g = build_random_slp(t, rng());
    check_entries(g, g);
  }
  check_entries(fibonacci_slp(12), fibonacci_slp(12));
}

TEST(ApMatch, CrossTableEntriesMatchDefinition) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 40; ++round) {
    const Text t = test::periodic_text(rng, 20 + rng() % 150, 2);
    const Text p = test::periodic_text(rng, 1 + rng() % 30, 2);
    check_entries(build_random_slp(t, rng()), build_balanced_slp(p));
  }
}

TEST(ApMatch, EagerTableAgreesWithLazyTable) {
  const Slp g = build_random_slp(to_text("abaababaabaababaababaabaababaabab"), 9);
  ApTable eager = compute_ap_table(g, g);
  EXPECT_EQ(eager.computed_entries(), std::size_t{g.size()} * g.size());
  ApTable lazy(g, g);
  for (Var x = 1; x <= g.size(); ++x)
    for (Var y = 1; y <= g.size(); ++y) EXPECT_EQ(lazy.entry(x, y), eager.entry(x, y));
}

TEST(ApMatch, PrefixAndSuffixMatch) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 30; ++round) {
    const Text t = test::periodic_text(rng, 2 + rng() % 100, 2);
    const Slp g = build_random_slp(t, rng());
    ApTable table(g, g);
    for (int q = 0; q < 40; ++q) {
      const Var y = 1 + rng() % g.size();
      const Text ty = expand(g, y);
      const Pos k = 1 + rng() % t.size();
      Pos want = 0;
      while (k + want <= t.size() && want < ty.size() && t[k - 1 + want] == ty[want]) ++want;
      EXPECT_EQ(table.prefix_match(g.root(), y, k), want);
      Pos back = 0;
      while (back < k && back < ty.size() && t[k - 1 - back] == ty[ty.size() - 1 - back]) ++back;
      EXPECT_EQ(table.suffix_match(g.root(), y, k), back);
    }
  }
}

TEST(ApMatch, LocalSearch) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 40; ++round) {
    const Text t = test::periodic_text(rng, 10 + rng() % 150, 2);
    const Slp g = build_random_slp(t, rng());
    ApTable table(g, g);
    for (int q = 0; q < 20; ++q) {
      const Var p = 1 + rng() % g.size();
      const Pos plen = g.length(p);
      const Pos b = 1 + rng() % t.size();
      const Ratio alpha{1 + rng() % 7, 1 + rng() % 3};
      const auto aps = local_search(table, g.root(), p, b, alpha);
      const Pos reach = alpha.num * plen / alpha.den;
      const Pos bound = (alpha.num + alpha.den - 1) / alpha.den;
      EXPECT_LE(aps.size(), bound);
      std::set<Pos> got;
      for (const auto& ap : aps)
        for (Pos x : as_set(ap)) got.insert(x);
      std::set<Pos> want;
      for (Pos u : oracle::naive_occ(t, expand(g, p)))
        if (u >= b && u <= b + reach) want.insert(u);
      EXPECT_EQ(got, want);
    }
  }
}
