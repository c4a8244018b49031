#include "sgbal/balance.hpp"

#include <gtest/gtest.h>

#include "sgbal/oracle.hpp"
#include "sgbal/tree.hpp"
#include "testutil.hpp"

namespace sgbal {
namespace {

TEST(ParityLabels, DirectProducts) {
  SignedGraph g = testutil::make_graph(3, {{0, 1, 1}, {0, 2, -1}});
  SpanningTree t = sample_tree(g, SamplerMethod::Bfs, 0, 0, VertexId{0});
  ParityLabels labels = compute_parity_labels(g, t);
  EXPECT_EQ(labels.parity, (std::vector<Sign>{1, 1, -1}));
}

TEST(ParityLabels, AllPositiveStar) {
  SignedGraph g =
      testutil::make_graph(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
  SpanningTree t = sample_tree(g, SamplerMethod::Dfs, 0, 0, VertexId{0});
  ParityLabels labels = compute_parity_labels(g, t);
  EXPECT_EQ(labels.parity, (std::vector<Sign>{1, 1, 1, 1}));
}

TEST(ParityLabels, TwoNegativesCancel) {
  SignedGraph g = testutil::make_graph(3, {{0, 1, -1}, {1, 2, -1}});
  SpanningTree t = sample_tree(g, SamplerMethod::Bfs, 0, 0, VertexId{0});
  ParityLabels labels = compute_parity_labels(g, t);
  EXPECT_EQ(labels.parity, (std::vector<Sign>{1, -1, 1}));
}

TEST(BalanceWithTree, SingleNegativeCycleFlipsNonTreeEdge) {
  SignedGraph g = testutil::make_graph(3, {{0, 1, 1}, {0, 2, -1}, {1, 2, 1}});
  SpanningTree t = sample_tree(g, SamplerMethod::Bfs, 0, 0, VertexId{0});
  ASSERT_EQ(t.is_tree_edge, (std::vector<std::uint8_t>{1, 1, 0}));
  BalancedState state = balance_with_tree(g, t);
  EXPECT_EQ(state.switch_count, 1u);
  EXPECT_EQ(state.signs, (std::vector<Sign>{1, -1, -1}));
}

TEST(BalanceWithTree, TreeGraphUnchanged) {
  SignedGraph g = testutil::make_graph(4, {{0, 1, -1}, {1, 2, 1}, {1, 3, -1}});
  SpanningTree t = sample_tree(g, SamplerMethod::Rdfs, 5, 2);
  BalancedState state = balance_with_tree(g, t);
  EXPECT_EQ(state.switch_count, 0u);
  EXPECT_EQ(state.signs, g.sign_vector());
}

TEST(BalanceWithTree, AllPositiveCycleAlreadyBalanced) {
  SignedGraph g = testutil::make_graph(
      4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}});
  for (SamplerMethod m : kAllSamplerMethods) {
    BalancedState state = balance_with_tree(g, sample_tree(g, m, 1, 0));
    EXPECT_EQ(state.switch_count, 0u) << method_token(m);
  }
}

TEST(IsBalanced, AllPositiveTriangle) {
  SignedGraph g = testutil::make_graph(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
  auto side = is_balanced(g, g.sign_vector());
  ASSERT_TRUE(side.has_value());
  EXPECT_EQ(*side, (std::vector<Sign>{1, 1, 1}));
}

TEST(IsBalanced, OddNegativeTriangle) {
  SignedGraph g = testutil::make_graph(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, -1}});
  EXPECT_FALSE(is_balanced(g, g.sign_vector()).has_value());
}

TEST(IsBalanced, TwoNegativesSplit) {
  SignedGraph g = testutil::make_graph(3, {{0, 1, 1}, {0, 2, -1}, {1, 2, -1}});
  auto side = is_balanced(g, g.sign_vector());
  ASSERT_TRUE(side.has_value());
  EXPECT_EQ(*side, (std::vector<Sign>{1, 1, -1}));
}

TEST(FrustrationOfAssignment, Examples) {
  SignedGraph tri =
      testutil::make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, -1}});
  EXPECT_EQ(frustration_of_assignment(tri, {1, 1, -1}), 1u);

  SignedGraph pos = testutil::make_graph(3, {{0, 1, 1}, {1, 2, 1}});
  EXPECT_EQ(frustration_of_assignment(pos, {1, 1, 1}), 0u);

  SignedGraph neg = testutil::make_graph(2, {{0, 1, -1}});
  EXPECT_EQ(frustration_of_assignment(neg, {1, 1}), 1u);
}

TEST(FrustrationOfAssignment, GlobalFlipSymmetry) {
  Rng gen(41, 0);
  for (int trial = 0; trial < 10; ++trial) {
    SignedGraph g = testutil::random_connected_graph(gen, 10, 20, 0.5);
    std::vector<Sign> theta(g.vertex_count());
    for (Sign& s : theta) s = gen.next_bit() ? Sign{1} : Sign{-1};
    std::vector<Sign> flipped(theta);
    for (Sign& s : flipped) s = static_cast<Sign>(-s);
    EXPECT_EQ(frustration_of_assignment(g, theta),
              frustration_of_assignment(g, flipped));
  }
}

// Every sampled tree yields a balanced state (validated by the independent
// two-coloring), the switch count is the Hamming distance, bounded by the
// cycle count, and never beats the exact optimum.
TEST(BalanceWithTree, SampledStatesAreBalancedAndBounded) {
  Rng gen(43, 0);
  for (int trial = 0; trial < 5; ++trial) {
    SignedGraph g = testutil::random_connected_graph(gen, 11, 22, 0.5);
    std::uint64_t exact = exact_frustration(g).frustration;
    for (SamplerMethod m : kAllSamplerMethods) {
      for (std::uint64_t it = 0; it < 4; ++it) {
        BalancedState state =
            balance_with_tree(g, sample_tree(g, m, trial, it));
        auto side = is_balanced(g, state.signs);
        ASSERT_TRUE(side.has_value()) << method_token(m);
        std::uint32_t hamming = 0;
        for (EdgeId e = 0; e < g.edge_count(); ++e)
          hamming += state.signs[e] != g.edge(e).sign;
        EXPECT_EQ(hamming, state.switch_count);
        // Only non-tree edges may differ from the input signs.
        SpanningTree t = sample_tree(g, m, trial, it);
        for (EdgeId e = 0; e < g.edge_count(); ++e)
          if (t.is_tree_edge[e]) EXPECT_EQ(state.signs[e], g.edge(e).sign);
        EXPECT_LE(state.switch_count,
                  g.edge_count() - g.vertex_count() + 1);
        EXPECT_GE(state.switch_count, exact);
      }
    }
  }
}

TEST(IsBalanced, BipartitionAssignmentHasZeroFrustration) {
  Rng gen(47, 0);
  for (int trial = 0; trial < 10; ++trial) {
    SignedGraph g = testutil::random_connected_graph(gen, 9, 16, 0.5);
    BalancedState state = balance_with_tree(
        g, sample_tree(g, SamplerMethod::KruskalRandom, trial, 0));
    auto side = is_balanced(g, state.signs);
    ASSERT_TRUE(side.has_value());
    // Violations measured against the balanced signs, not the originals.
    std::uint64_t violations = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edge(e);
      if (state.signs[e] * (*side)[ed.src] * (*side)[ed.tgt] < 0)
        ++violations;
    }
    EXPECT_EQ(violations, 0u);
  }
}

TEST(IsBalanced, LengthMismatchThrows) {
  SignedGraph g = testutil::make_graph(2, {{0, 1, 1}});
  EXPECT_THROW(is_balanced(g, {}), ContractViolation);
  EXPECT_THROW(frustration_of_assignment(g, {1}), ContractViolation);
}

}  // namespace
}  // namespace sgbal
