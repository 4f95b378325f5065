// Copyright 2026 The pwqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "pwqs/classify.hpp"
#include "pwqs/local_equivalence.hpp"
#include "pwqs/protocols.hpp"

using namespace pwqs;

namespace {

// Expected blocks for an open chain from the linear equations
// E_B = 0, E_0 = 1 + E_1, E_L = 1 + (E_{L+1} + E_{L-1}) / 2.
double expected_blocks_linear(int B) {
  // Write E_L = a_L + b_L * E_1 and use E_0 = 1 + E_1 to start.
  std::vector<double> a(static_cast<std::size_t>(B + 1)), b(a);
  a[0] = 1;
  b[0] = 1;
  a[1] = 0;
  b[1] = 1;
  for (int L = 1; L < B; ++L) {
    a[static_cast<std::size_t>(L + 1)] = 2 * a[static_cast<std::size_t>(L)] - 2 - a[static_cast<std::size_t>(L - 1)];
    b[static_cast<std::size_t>(L + 1)] = 2 * b[static_cast<std::size_t>(L)] - b[static_cast<std::size_t>(L - 1)];
  }
  const double e1 = -a[static_cast<std::size_t>(B)] / b[static_cast<std::size_t>(B)];
  return 1 + e1;
}

std::vector<std::set<int>> block_users(const std::vector<BlockKind>& blocks) {
  std::vector<std::set<int>> out;
  int next = 1;
  for (BlockKind k : blocks) {
    std::set<int> us;
    for (std::size_t i = 0; i < build_block(k).users.size(); ++i) us.insert(next++);
    out.push_back(us);
  }
  return out;
}

}  // namespace

TEST(Storage, BuildBlock) {
  Block p = build_block(BlockKind::Path4);
  EXPECT_EQ(p.exponent, 3);
  EXPECT_EQ(p.graph, path_graph(std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(build_block(BlockKind::Star4).exponent, 3);
  EXPECT_EQ(classify_graph(build_block(BlockKind::Star4).graph).label, "star");
  Block t = build_block(BlockKind::Three);
  EXPECT_EQ(t.exponent, 2);
  EXPECT_EQ(t.graph.size(), 3u);
  for (BlockKind k : {BlockKind::Path4, BlockKind::Star4, BlockKind::Three}) {
    PhotonPlan plan = block_plan(k);
    EXPECT_TRUE(locally_equivalent(output_graph(graph_layer(plan), plan), build_block(k).graph)) << to_string(k);
  }
  EXPECT_THROW(block_from_string("Hexagon"), Error);
}

TEST(Storage, ChainExamples) {
  ProtocolResult p = fuse_chain({BlockKind::Path4, BlockKind::Path4}, "Y", false);
  EXPECT_EQ(p.final_graph, path_graph(std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(p.exponent, 1);

  ProtocolResult s = fuse_chain({BlockKind::Star4, BlockKind::Star4}, "X", false);
  EXPECT_TRUE(locally_equivalent(s.final_graph, star_graph(1, {2, 3, 4})));

  ProtocolResult z = fuse_chain({BlockKind::Three, BlockKind::Three, BlockKind::Three}, "", false);
  EXPECT_EQ(classify_graph(z.final_graph).label, "path");
  EXPECT_EQ(z.final_graph.size(), 7u);
  for (int u : {1, 2, 3})
    for (int n : z.final_graph.neighbors(u)) EXPECT_GE(n, 1000);

  ProtocolResult c = fuse_chain({BlockKind::Path4, BlockKind::Path4}, "YY", true);
  EXPECT_TRUE(c.success);
  EXPECT_EQ(c.exponent, 2);
  EXPECT_EQ(c.final_graph, cycle_graph(std::vector<int>{1, 2, 3, 4}));

  ProtocolResult mixed = fuse_chain({BlockKind::Path4, BlockKind::Star4, BlockKind::Path4}, "YY", false);
  EXPECT_EQ(classify_graph(mixed.final_graph).label, "caterpillar");
}

TEST(Storage, ChainErrors) {
  EXPECT_THROW(fuse_chain({BlockKind::Path4, BlockKind::Path4}, "YY", false), Error);
  EXPECT_THROW(fuse_chain({BlockKind::Path4}, "", false), Error);
  EXPECT_THROW(fuse_chain({BlockKind::Path4, BlockKind::Path4}, "Q", false), Error);
}

TEST(Storage, ClosureFailureAborts) {
  int calls = 0;
  ProtocolResult r = fuse_chain({BlockKind::Path4, BlockKind::Path4}, "YY", true, [&] { return ++calls < 2; });
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.fusion_attempts, 2);
}

TEST(Storage, FailureRevertsOneBlock) {
  // Succeed, fail, then succeed twice: blocks 1..4 consumed plus one rebuild.
  std::vector<bool> seq{true, false, true, true};
  std::size_t i = 0;
  ProtocolResult r = fuse_chain({BlockKind::Path4, BlockKind::Path4, BlockKind::Path4}, "YY", false,
                                [&] { return seq.at(i++); });
  EXPECT_EQ(r.fusion_attempts, 4);
  EXPECT_EQ(r.blocks_consumed, 5);
  EXPECT_EQ(r.final_graph, path_graph(std::vector<int>{1, 2, 3, 4, 5, 6}));
}

TEST(Storage, FailureContainment) {
  std::mt19937_64 rng(11);
  const std::vector<BlockKind> kinds{BlockKind::Path4, BlockKind::Star4, BlockKind::Three, BlockKind::Path4, BlockKind::Star4};
  int failures = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<BlockKind> blocks;
    const int B = 2 + static_cast<int>(rng() % 5);
    for (int b = 0; b < B; ++b) blocks.push_back(kinds[rng() % kinds.size()]);
    const auto users = block_users(blocks);
    ProtocolResult r = fuse_chain(blocks, "", false, [&] { return (rng() >> 63) != 0; });
    for (const auto& ev : r.history) {
      if (ev.success) continue;
      ++failures;
      std::set<int> keep;
      for (int b = 0; b < ev.joint - 1; ++b) keep.insert(users[static_cast<std::size_t>(b)].begin(), users[static_cast<std::size_t>(b)].end());
      EXPECT_EQ(ev.before.induced(keep), ev.after.induced(keep));
      for (int u : users[static_cast<std::size_t>(ev.joint - 1)]) EXPECT_FALSE(ev.after.has_vertex(u));
    }
    // Open chains always finish with every block in place.
    for (const auto& us : users)
      for (int u : us) EXPECT_TRUE(r.final_graph.has_vertex(u));
  }
  EXPECT_GT(failures, 100);
}

TEST(Storage, ExpectedBlocksOracles) {
  for (int B = 2; B <= 6; ++B) {
    ChainExpectation e = enumerate_chain_blocks(B, 100000);
    EXPECT_LT(e.unresolved_mass, 1e-13);
    EXPECT_NEAR(e.mean_blocks, expected_blocks_linear(B), 1e-9) << B;
  }
  // Two blocks: each attempt costs one block and restarts on failure.
  EXPECT_NEAR(expected_blocks_linear(2), 4.0, 1e-12);
}

TEST(Storage, MonteCarloChain) {
  ProtocolSpec spec;
  spec.protocol = "chain";
  spec.blocks = {BlockKind::Path4, BlockKind::Path4, BlockKind::Path4, BlockKind::Path4};
  MonteCarloStats st = monte_carlo(spec, 100000, 2026);
  EXPECT_DOUBLE_EQ(st.exact_probability, 0.125);
  EXPECT_TRUE(st.within_3sigma) << st.estimated_probability;
  const double mean = st.resource_counts.at("mean_blocks");
  const double se = st.resource_counts.at("mean_blocks_std_error");
  EXPECT_LE(std::abs(mean - expected_blocks_linear(4)), 3 * se) << mean;
}

TEST(Storage, MonteCarloDeterministic) {
  ProtocolSpec spec;
  spec.protocol = "ghz";
  spec.M = 4;
  std::vector<TrialLog> a, b;
  MonteCarloStats s1 = monte_carlo(spec, 2000, 5, &a);
  MonteCarloStats s2 = monte_carlo(spec, 2000, 5, &b);
  EXPECT_EQ(s1.successes, s2.successes);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].success, b[i].success);
  EXPECT_DOUBLE_EQ(s1.exact_probability, 0.125);
  EXPECT_EQ(s1.resource_counts.at("bell_pairs"), 4);
  MonteCarloStats s3 = monte_carlo(spec, 2000, 6);
  EXPECT_NE(s1.successes, s3.successes);
  EXPECT_THROW(monte_carlo(spec, 0, 1), Error);
}

TEST(Storage, MonteCarloProtocols) {
  for (const std::string name : {"ghz", "path", "cycle"}) {
    for (int M = 3; M <= 5; ++M) {
      ProtocolSpec spec;
      spec.protocol = name;
      spec.M = M;
      MonteCarloStats st = monte_carlo(spec, 20000, 1000 + static_cast<std::uint64_t>(M));
      EXPECT_TRUE(st.within_5sigma) << name << M;
      EXPECT_EQ(st.exact_probability, std::ldexp(1.0, name == "cycle" ? -(M + 1) : -(M - 1)));
    }
  }
}
