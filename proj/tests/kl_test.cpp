#include <gtest/gtest.h>

#include <cmath>

#include "shardsim/kl.hpp"
#include "shardsim/rng.hpp"
#include "support/fixtures.hpp"

namespace shardsim {
namespace {

using testing::addr;

// Weighted cut of the activity edges, counted directly.
Count activity_cut(const WindowActivity& w, const Assignment& a) {
  Count cut = 0;
  for (const auto& e : w.edges()) {
    if (a.shard_of(e.from) != a.shard_of(e.to)) cut += e.count;
  }
  return cut;
}

TEST(KlSelect, GainIsExternalMinusInternal) {
  WindowActivity w(0, 10);
  Assignment a(2);
  a.assign(addr(0), 0);
  a.assign(addr(1), 0);
  for (std::uint64_t i = 2; i <= 4; ++i) {
    a.assign(addr(i), 1);
    w.record(addr(0), addr(i));
  }
  w.record(addr(1), addr(0));
  const auto c = kl_select_candidates(a, w);
  ASSERT_EQ(c[0].size(), 1u);
  EXPECT_EQ(c[0][0].vertex, addr(0));
  EXPECT_EQ(c[0][0].target, 1u);
  EXPECT_EQ(c[0][0].gain, 2);
  Assignment moved = a;
  moved.assign(addr(0), 1);
  EXPECT_EQ(static_cast<std::int64_t>(activity_cut(w, a)) - static_cast<std::int64_t>(activity_cut(w, moved)),
            c[0][0].gain);
}

TEST(KlSelect, InternalAndIsolatedVerticesAreNotCandidates) {
  WindowActivity w(0, 10);
  Assignment a(2);
  for (std::uint64_t i = 0; i < 4; ++i) a.assign(addr(i), 0);
  a.assign(addr(9), 1);
  w.record(addr(0), addr(1));
  w.record(addr(1), addr(2));
  w.record(addr(3), addr(3));
  const auto c = kl_select_candidates(a, w);
  EXPECT_TRUE(c[0].empty());
  EXPECT_TRUE(c[1].empty());
}

TEST(KlMatrix, NoCandidatesGivesIdentity) {
  PartitionerConfig cfg;
  cfg.k = 3;
  Assignment a(3);
  WindowActivity w(0, 1);
  const auto m = kl_build_matrix(CandidateLists(3), a, w, cfg);
  for (ShardId i = 0; i < 3; ++i) {
    for (ShardId j = 0; j < 3; ++j) EXPECT_EQ(m(i, j), i == j ? 1.0 : 0.0);
  }
}

// Shard 0 carries 16 units of activity and shard 1 carries 12. Four
// unit-weight vertices of shard 0 each talk only to Y in shard 1; Y is tied to
// Z as strongly as to them, so only the four are candidates. Moving 2 units
// equalizes the shards, so p(0,1) = 2 / 4.
struct TwoShard {
  WindowActivity w{0, 100};
  Assignment a{2};
  PartitionerConfig cfg;
  TwoShard() {
    cfg.k = 2;
    const Address y = addr(100);
    const Address z = addr(101);
    a.assign(y, 1);
    a.assign(z, 1);
    w.record(y, z, 4);
    for (std::uint64_t i = 0; i < 4; ++i) {
      a.assign(addr(i), 0);
      w.record(addr(i), y);
    }
    a.assign(addr(50), 0);
    a.assign(addr(51), 0);
    w.record(addr(50), addr(51), 6);
  }
};

TEST(KlMatrix, TwoShardFlowMovesHalfTheSurplus) {
  TwoShard s;
  const auto c = kl_select_candidates(s.a, s.w);
  ASSERT_EQ(c[0].size(), 4u);
  ASSERT_TRUE(c[1].empty());
  const auto m = kl_build_matrix(c, s.a, s.w, s.cfg);
  EXPECT_TRUE(m.is_row_stochastic());
  // (16 - 12) / 2 units over 4 units of candidate weight.
  EXPECT_DOUBLE_EQ(m(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(m(0, 0), 0.5);
  EXPECT_EQ(m(1, 0), 0.0);
  EXPECT_EQ(m(1, 1), 1.0);
}

TEST(KlMatrix, SymmetricInputGivesSymmetricMatrix) {
  WindowActivity w(0, 100);
  Assignment a(2);
  PartitionerConfig cfg;
  for (std::uint64_t i = 0; i < 3; ++i) {
    a.assign(addr(i), 0);
    a.assign(addr(10 + i), 1);
    w.record(addr(i), addr(10 + i));
  }
  const auto c = kl_select_candidates(a, w);
  const auto m = kl_build_matrix(c, a, w, cfg);
  EXPECT_DOUBLE_EQ(m(0, 1), m(1, 0));
  EXPECT_DOUBLE_EQ(m(0, 0), m(1, 1));
  EXPECT_TRUE(m.is_row_stochastic());
}

TEST(KlMatrix, RejectsMismatchedShardCount) {
  PartitionerConfig cfg;
  cfg.k = 3;
  Assignment a(2);
  WindowActivity w(0, 1);
  EXPECT_THROW(kl_build_matrix(CandidateLists(2), a, w, cfg), std::invalid_argument);
}

TEST(KlExchange, IdentityLeavesAssignmentUnchanged) {
  TwoShard s;
  const auto c = kl_select_candidates(s.a, s.w);
  EXPECT_EQ(kl_exchange(s.a, c, ProbabilityMatrix::identity(2), 9), s.a);
}

TEST(KlExchange, CertainMoveAndDeterminism) {
  Assignment a(3);
  a.assign(addr(1), 0);
  a.assign(addr(2), 2);
  CandidateLists c(3);
  c[0].push_back({addr(1), 0, 2, 1, 5});
  ProbabilityMatrix m(3);
  m(0, 0) = 0.0;
  m(0, 2) = 1.0;
  const auto out = kl_exchange(a, c, m, 1);
  EXPECT_EQ(out.shard_of(addr(1)), 2u);
  EXPECT_EQ(out.shard_of(addr(2)), 2u);

  TwoShard s;
  const auto cands = kl_select_candidates(s.a, s.w);
  const auto pm = kl_build_matrix(cands, s.a, s.w, s.cfg);
  EXPECT_EQ(kl_exchange(s.a, cands, pm, 77), kl_exchange(s.a, cands, pm, 77));
}

// Mean moved weight per (i, target) over 1000 seeds lies within 3 sigma of
// p(i, t) * W_i, on a random 4-shard instance.
TEST(KlExchange, ExpectedFlowMatchesMatrix) {
  constexpr ShardId k = 4;
  Rng rng(31337);
  WindowActivity w(0, 1000);
  Assignment a(k);
  constexpr std::uint64_t n = 120;
  for (std::uint64_t v = 0; v < n; ++v) a.assign(addr(v), static_cast<ShardId>(v < 50 ? 0 : rng.uniform(k)));
  for (int e = 0; e < 500; ++e) {
    const auto u = rng.uniform(n);
    const auto v = rng.uniform(n);
    if (u != v) w.record(addr(u), addr(v), 1 + rng.uniform(3));
  }
  PartitionerConfig cfg;
  cfg.k = k;
  const auto cands = kl_select_candidates(a, w);
  const auto m = kl_build_matrix(cands, a, w, cfg);
  ASSERT_TRUE(m.is_row_stochastic());

  double expected[k][k] = {};
  double variance[k][k] = {};
  for (ShardId i = 0; i < k; ++i) {
    double total = 0.0;
    double toward[k] = {};
    for (const auto& c : cands[i]) {
      total += static_cast<double>(c.weight);
      toward[c.target] += static_cast<double>(c.weight);
    }
    for (const auto& c : cands[i]) {
      const double q = std::min(1.0, m(i, c.target) * total / toward[c.target]);
      const double wt = static_cast<double>(c.weight);
      expected[i][c.target] += q * wt;
      variance[i][c.target] += wt * wt * q * (1 - q);
    }
    for (ShardId j = 0; j < k; ++j) {
      if (j != i && toward[j] > 0) EXPECT_NEAR(expected[i][j], m(i, j) * total, 1e-9);
    }
  }

  constexpr int kTrials = 1000;
  double moved[k][k] = {};
  for (int t = 0; t < kTrials; ++t) {
    const auto out = kl_exchange(a, cands, m, mix_seed(555, static_cast<std::uint64_t>(t)));
    for (ShardId i = 0; i < k; ++i) {
      for (const auto& c : cands[i]) {
        if (out.shard_of(c.vertex) == c.target) moved[i][c.target] += static_cast<double>(c.weight);
      }
    }
  }
  int checked = 0;
  for (ShardId i = 0; i < k; ++i) {
    for (ShardId j = 0; j < k; ++j) {
      if (i == j || expected[i][j] == 0.0) continue;
      const double sigma = std::sqrt(variance[i][j] / kTrials);
      EXPECT_NEAR(moved[i][j] / kTrials, expected[i][j], 3 * sigma + 1e-12) << i << "->" << j;
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

}  // namespace
}  // namespace shardsim
