#include <gtest/gtest.h>

#include "slp/core.hpp"
#include "slp/grammar_io.hpp"
#include "slp/oracle.hpp"
#include "support.hpp"

using namespace slp;
using slp::test::example_slp;

TEST(Core, ExampleGrammarMetrics) {
  const Slp g = example_slp();
  EXPECT_EQ(g.size(), 8u);
  EXPECT_EQ(g.length(), 14u);
  EXPECT_EQ(g.height(), 4u);
  EXPECT_EQ(g.height(3), 1u);
  EXPECT_EQ(g.height(7), 3u);
  EXPECT_EQ(test::to_string(oracle::decompress(g)), "abbabbbabbabbb");
}

TEST(Core, ValidateReportsEachViolation) {
  using P = Production;
  EXPECT_EQ(validate({}).front().message, "no root");
  auto v = validate({P::terminal('a'), P::pair(1, 3), P::pair(1, 2)});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].rule, 2u);
  EXPECT_EQ(v[0].message, "forward reference at rule 2");
  EXPECT_EQ(v[1].message, "invalid child at rule 3");
  EXPECT_THROW(Slp({P::terminal('a'), P::pair(2, 1)}), Error);
}

TEST(Core, LengthOverflowDetected) {
  using P = Production;
  std::vector<P> rules{P::terminal('a')};
  for (Var i = 2; i <= 64; ++i) rules.push_back(P::pair(i - 1, i - 1));
  auto v = validate(rules);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].message, "length overflow at rule 64");
  rules.pop_back();
  EXPECT_EQ(Slp(rules).length(), Pos{1} << 62);
}

TEST(Core, CharAtMatchesDecompression) {
  const Slp g = example_slp();
  const Text t = oracle::decompress(g);
  for (Pos u = 1; u <= t.size(); ++u) EXPECT_EQ(char_at(g, g.root(), u), t[u - 1]);
  EXPECT_THROW(char_at(g, g.root(), 0), Error);
  EXPECT_THROW(char_at(g, g.root(), 15), Error);
}

TEST(Core, CrossingNode) {
  const Slp g = example_slp();
  EXPECT_EQ(crossing_node(g, 8, {2, 3}), (NodeLocator{3, 2}));
  EXPECT_EQ(crossing_node(g, 8, {7, 8}), (NodeLocator{8, 1}));
  EXPECT_EQ(crossing_node(g, 8, {4, 4}), (NodeLocator{1, 4}));
}

TEST(Core, DecompositionCoversIntervalExactly) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    const Text t = test::random_text(rng, 1 + rng() % 200, 3);
    const Slp g = build_random_slp(t, rng());
    const Pos n = g.length();
    for (int q = 0; q < 20; ++q) {
      Pos b = 1 + rng() % n, e = 1 + rng() % n;
      if (b > e) std::swap(b, e);
      const auto cover = decompose_interval(g, {b, e});
      EXPECT_LE(cover.size(), 2 * std::max<std::size_t>(1, g.height()));
      Pos at = b;
      Text glued;
      for (const auto& node : cover) {
        EXPECT_EQ(node.position, at);
        at += g.length(node.label);
        const Text part = expand(g, node.label);
        glued.insert(glued.end(), part.begin(), part.end());
      }
      EXPECT_EQ(at, e + 1);
      EXPECT_EQ(glued, Text(t.begin() + (b - 1), t.begin() + e));
    }
  }
}

TEST(Core, OccurrenceCounts) {
  const Slp g = example_slp();
  const auto c = occurrence_counts(g, g.root());
  EXPECT_EQ(c[8], 1u);
  EXPECT_EQ(c[7], 2u);
  EXPECT_EQ(c[3], 4u);
  Pos leaves = c[1] + c[2];
  EXPECT_EQ(leaves, 14u);
}
