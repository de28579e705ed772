#include <gtest/gtest.h>

#include "slp/grammar_io.hpp"
#include "slp/lce.hpp"
#include "slp/oracle.hpp"
#include "support.hpp"

using namespace slp;
using slp::test::example_slp;

TEST(Lce, ExampleQueries) {
  const Slp g = example_slp();
  const Text t = oracle::decompress(g);
  LceEngine lce(g);
  EXPECT_EQ(lce.lce_rr(8, 1, 8), oracle::naive_lce(t, LceMode::RR, 1, 8));
  EXPECT_EQ(lce.lce_rr(8, 1, 8), 7u);
  EXPECT_EQ(lce.lce_rr(8, 2, 5), 2u);
  EXPECT_EQ(lce.lce_dir(LceMode::LL, 3, 6), oracle::naive_lce(t, LceMode::LL, 3, 6));
  EXPECT_EQ(lce.lce_dir(LceMode::LL, 3, 6), 3u);  // lcs("abb", "abbabb")
  EXPECT_TRUE(lce.match_at(8, 6, 4));
  EXPECT_FALSE(lce.match_at(8, 6, 1));
  EXPECT_EQ(lce.first_mismatch(8, 7, 8), 7u);
  EXPECT_EQ(lce.first_mismatch(8, 6, 12), 0u);
}

TEST(Lce, PreconditionsAreDomainErrors) {
  LceEngine lce(example_slp());
  EXPECT_THROW(lce.match_at(8, 6, 12), Error);
  EXPECT_NO_THROW(lce.match_at(8, 6, 11));
  EXPECT_THROW(lce.match_at(6, 8, 1), Error);
  EXPECT_THROW(lce.first_mismatch(8, 6, 2), Error);
  EXPECT_THROW(lce.lce_dir(LceMode::RR, 0, 3), Error);
  EXPECT_THROW(lce.lce_dir(LceMode::RR, 3, 15), Error);
}

TEST(Lce, UniverseLayout) {
  const Slp g = example_slp();
  LceEngine lce(g);
  const Universe& u = lce.universe();
  const Text t = expand(g);
  const Text rev(t.rbegin(), t.rend());
  EXPECT_EQ(expand(u.grammar(), u.mirror(g.root())), rev);
  Text both = t;
  both.insert(both.end(), rev.begin(), rev.end());
  EXPECT_EQ(expand(u.grammar(), u.with_mirror(g.root())), both);
  for (Var i = 1; i <= g.size(); ++i) EXPECT_EQ(expand(u.grammar(), i), expand(g, i));
}

TEST(Lce, AllModesAgreeWithOracle) {
  std::mt19937_64 rng(21);
  const LceMode modes[] = {LceMode::RR, LceMode::LL, LceMode::LR, LceMode::RL};
  for (int round = 0; round < 40; ++round) {
    const Text t = round % 3 ? test::periodic_text(rng, 1 + rng() % 200, 1 + round % 3)
                             : test::random_text(rng, 1 + rng() % 200, 2);
    const Slp g = build_random_slp(t, rng());
    LceEngine lce(g);
    for (int q = 0; q < 60; ++q) {
      const Pos k1 = 1 + rng() % t.size(), k2 = 1 + rng() % t.size();
      for (LceMode m : modes)
        ASSERT_EQ(lce.lce_dir(m, k1, k2), oracle::naive_lce(t, m, k1, k2))
            << "mode " << int(m) << " k1=" << k1 << " k2=" << k2;
    }
  }
}

TEST(Lce, WithinVariableQueries) {
  std::mt19937_64 rng(22);
  const LceMode modes[] = {LceMode::RR, LceMode::LL, LceMode::LR, LceMode::RL};
  for (int round = 0; round < 20; ++round) {
    const Text t = test::periodic_text(rng, 2 + rng() % 150, 2);
    const Slp g = build_random_slp(t, rng());
    LceEngine lce(g);
    for (int q = 0; q < 60; ++q) {
      const Var v = 1 + rng() % g.size();
      const Text tv = expand(g, v);
      const Pos k1 = 1 + rng() % tv.size(), k2 = 1 + rng() % tv.size();
      for (LceMode m : modes) ASSERT_EQ(lce.within(v, m, k1, k2), oracle::naive_lce(tv, m, k1, k2));
    }
  }
}

TEST(Lce, FibonacciLongText) {
  const Slp f = fibonacci_slp(60);
  LceEngine lce(f);
  const Pos n = f.length();
  // the suffix after the first child is itself a prefix of the word
  const Pos shift = f.length(f.root() - 1);
  EXPECT_EQ(lce.lce_dir(LceMode::RR, 1, 1 + shift), n - shift);
  const Slp small = fibonacci_slp(20);
  const Text t = expand(small);
  LceEngine lce_small(small);
  const Pos s20 = small.length(small.root() - 1);
  for (Pos k : {Pos{1}, Pos{2}, Pos{7}, Pos{100}, Pos{2000}})
    EXPECT_EQ(lce_small.lce_dir(LceMode::RR, k, k + s20 - 1), oracle::naive_lce(t, LceMode::RR, k, k + s20 - 1));
  EXPECT_EQ(lce.lce_dir(LceMode::RR, 5, 5), n - 4);
}
