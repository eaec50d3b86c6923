#include <gtest/gtest.h>

#include <random>

#include "brp/adversaries.h"
#include "brp/crep.h"
#include "oracles.h"

using namespace brp;
using namespace brp::crep;

namespace {

SubsetGraph graph(std::vector<int> volume, std::vector<std::tuple<int, int, Cost>> edges) {
  SubsetGraph g;
  for (std::size_t i = 0; i < volume.size(); ++i) {
    g.ids.push_back(static_cast<ComponentId>(10 * i));
  }
  g.volume = std::move(volume);
  g.weight.assign(g.ids.size(), std::vector<Cost>(g.ids.size(), 0));
  for (const auto &[a, b, w] : edges) {
    g.weight[a][b] = w;
    g.weight[b][a] = w;
  }
  return g;
}

Component comp(std::vector<NodeId> nodes, ClusterId cluster, int reserved) {
  return Component{nodes.front(), std::move(nodes), cluster, reserved, 0};
}

} // namespace

// --- subset searches --------------------------------------------------------

TEST(FindMergeSet, PairAtThreshold) {
  EXPECT_EQ(find_merge_set(graph({1, 1}, {{0, 1, 3}}), 2, 3), (std::vector<ComponentId>{0, 10}));
  EXPECT_TRUE(find_merge_set(graph({1, 1}, {{0, 1, 2}}), 2, 3).empty());
}

TEST(FindMergeSet, LargestCardinalityWins) {
  const auto g = graph({1, 1, 1}, {{0, 1, 2}, {1, 2, 2}});
  EXPECT_EQ(find_merge_set(g, 3, 2), (std::vector<ComponentId>{0, 10, 20}));
  // With k = 2 only pairs fit.
  EXPECT_EQ(find_merge_set(g, 2, 2), (std::vector<ComponentId>{0, 10}));
}

TEST(FindMergeSet, BelowThresholdEverywhere) {
  EXPECT_TRUE(find_merge_set(graph({1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}), 3, 2).empty());
  EXPECT_TRUE(find_merge_set(graph({1, 1}, {{0, 1, 9}}), 1, 2).empty());
}

TEST(FindMergeSet, TieBreaksOnComThenLexicographic) {
  // {0,1} has com 3, {1,2} has com 4: the heavier pair wins.
  EXPECT_EQ(find_merge_set(graph({1, 1, 1}, {{0, 1, 3}, {1, 2, 4}}), 2, 3), (std::vector<ComponentId>{10, 20}));
  // Equal com: the lexicographically smaller tuple wins.
  EXPECT_EQ(find_merge_set(graph({1, 1, 1}, {{0, 2, 3}, {1, 2, 3}}), 2, 3), (std::vector<ComponentId>{0, 20}));
}

TEST(FindEpochSet, TwoFullComponents) {
  EXPECT_EQ(find_epoch_set(graph({2, 2}, {{0, 1, 4}}), 2, 1), (std::vector<ComponentId>{0, 10}));
  EXPECT_TRUE(find_epoch_set(graph({2, 2}, {{0, 1, 3}}), 2, 1).empty());
}

TEST(FindEpochSet, PrefersMinimalSubset) {
  // Only {10,20} qualifies among pairs (vol 3, com 3); the 3-set containing
  // it qualifies too but is not minimal.
  const auto g = graph({2, 2, 1}, {{1, 2, 3}, {0, 1, 2}, {0, 2, 2}});
  EXPECT_EQ(find_epoch_set(g, 2, 1), (std::vector<ComponentId>{10, 20}));
}

TEST(SubsetSearch, AgreesWithNaiveEnumeration) {
  std::mt19937_64 rng(2024);
  int merges = 0;
  int epochs = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t count = 1 + rng() % 8;
    const int k = 1 + static_cast<int>(rng() % 5);
    const Cost alpha = 1 + static_cast<Cost>(rng() % 3);
    const auto g = oracle::random_graph(rng, count, std::max(1, k), alpha);
    const auto merge = find_merge_set(g, k, alpha);
    const auto epoch = find_epoch_set(g, k, alpha);
    ASSERT_EQ(merge, oracle::merge_set(g, k, alpha)) << "trial " << trial;
    ASSERT_EQ(epoch, oracle::epoch_set(g, k, alpha)) << "trial " << trial;
    merges += merge.empty() ? 0 : 1;
    epochs += epoch.empty() ? 0 : 1;
  }
  // The generator must exercise both outcomes.
  EXPECT_GT(merges, 100);
  EXPECT_GT(epochs, 100);
}

// --- state machine ----------------------------------------------------------

TEST(CrepInit, LedgerOfFreshState) {
  const Params p{4, 2, 2, 1, 4};
  const auto s = CrepState::init(p, Configuration::contiguous(p));
  const auto ledger = s.cluster_ledger();
  ASSERT_EQ(ledger.size(), 4U);
  for (int c = 0; c < 2; ++c) {
    EXPECT_EQ(ledger[c].occupied, 2);
    EXPECT_EQ(ledger[c].reserved, 2);
    EXPECT_EQ(ledger[c].spare, 0);
  }
  for (int c = 2; c < 4; ++c) {
    EXPECT_EQ(ledger[c].spare, 4);
  }
  EXPECT_EQ(s.cluster_capacity(), 4);
  EXPECT_TRUE(check_invariants(s).empty());
}

TEST(CrepInit, DegenerateK1) {
  const Params p{2, 1, 2, 1, 4};
  const auto s = CrepState::init(p, Configuration::contiguous(p));
  for (const auto &[id, c] : s.components()) {
    EXPECT_EQ(c.reserved, 0);
  }
  EXPECT_EQ(s.cluster_count(), 4);
  EXPECT_EQ(s.cluster_capacity(), 2);
}

TEST(CrepInit, NeedsAugmentation) {
  const Params p{4, 2, 2, 1, 2};
  try {
    (void)CrepState::init(p, Configuration::contiguous(p));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::InsufficientAugmentation);
  }
}

TEST(CrepMerge, ReservePathMovesIntoLowerId) {
  const Params p{4, 2, 2, 1, 4};
  auto s = CrepState::init(p, Configuration::contiguous(p));
  const std::vector<ComponentId> x = {1, 2};
  const auto moves = s.merge(x);
  ASSERT_EQ(moves.size(), 1U);
  EXPECT_EQ(moves[0], (Move{2, 0}));
  const auto &merged = s.component(1);
  EXPECT_EQ(merged.nodes, (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(merged.reserved, 0);
  EXPECT_EQ(s.component_of(2), 1);
  EXPECT_TRUE(check_invariants(s, {false}).empty());
}

TEST(CrepMerge, FreshClusterWhenNoReservationSuffices) {
  const Params p{6, 2, 3, 1, 4};
  auto s = CrepState::from_parts(
      p,
      {comp({0}, 0, 0), comp({2}, 0, 1), comp({4}, 0, 0), comp({1}, 1, 0), comp({3}, 1, 1), comp({5}, 1, 0)},
      {}
  );
  const std::vector<ComponentId> x = {0, 1};
  const auto moves = s.merge(x);
  EXPECT_EQ(moves, (std::vector<Move>{{0, 2}, {1, 2}}));
  EXPECT_EQ(s.component(0).reserved, 0);
  EXPECT_EQ(s.component(0).cluster, 2);
}

TEST(CrepMerge, HostWithRoomTakesTheRest) {
  const Params p{8, 4, 2, 1, 4};
  auto s = CrepState::from_parts(
      p, {comp({0, 1, 2}, 0, 1), comp({3}, 0, 1), comp({4}, 1, 1), comp({5}, 1, 1), comp({6}, 1, 1), comp({7}, 1, 1)},
      {}
  );
  const std::vector<ComponentId> x = {0, 5};
  const auto moves = s.merge(x);
  EXPECT_EQ(moves, (std::vector<Move>{{5, 0}}));
  EXPECT_EQ(s.component(0).reserved, 0);
  EXPECT_EQ(s.merge_migrations(5), 1);
}

TEST(CrepMerge, FoldsWeightsAndPaidAccounts) {
  const Params p{6, 3, 2, 2, 4};
  auto s = CrepState::init(p, Configuration::contiguous(p));
  s.set_weight(0, 1, 2);
  s.set_paid(0, 1, 2);
  s.set_weight(0, 4, 1);
  s.set_weight(1, 4, 1);
  s.set_weight(1, 5, 1);
  const std::vector<ComponentId> x = {0, 1};
  (void)s.merge(x);
  EXPECT_EQ(s.weight(0, 4), 2);
  EXPECT_EQ(s.weight(0, 5), 1);
  EXPECT_EQ(s.component(0).comm_paid, 2);
  EXPECT_EQ(s.weights().count({0, 1}), 0U);
}

TEST(CrepEpoch, OversizedComponentEvictsOneSingleton) {
  const Params p{6, 3, 2, 1, 4};
  auto s = CrepState::from_parts(p, {comp({0, 1, 2, 3}, 2, 0), comp({4}, 0, 1), comp({5}, 0, 1)}, {});
  const std::vector<ComponentId> y = {0};
  const auto moves = s.end_epoch(y, 7);
  EXPECT_EQ(moves, (std::vector<Move>{{0, 1}}));
  ASSERT_EQ(s.epochs().size(), 1U);
  EXPECT_EQ(s.epochs()[0].evicted, 1);
  EXPECT_EQ(s.epochs()[0].t, 7);
  EXPECT_EQ(s.components().size(), 6U);
  for (const auto &space : s.cluster_ledger()) {
    EXPECT_GE(space.spare, 0);
  }
}

TEST(CrepEpoch, EmptySetIsNoOp) {
  const Params p{4, 2, 2, 1, 4};
  auto s = CrepState::init(p, Configuration::contiguous(p));
  EXPECT_TRUE(s.end_epoch({}).empty());
  EXPECT_TRUE(s.epochs().empty());
}

TEST(CrepStep, FirstRequestOnlyAddsWeight) {
  const Params p{4, 2, 2, 2, 4};
  auto s = CrepState::init(p, Configuration::contiguous(p));
  const auto out = s.handle_request({0, 2, 1});
  EXPECT_TRUE(out.moves.empty());
  EXPECT_TRUE(out.merged.empty());
  EXPECT_EQ(s.weight(0, 2), 1);
  EXPECT_TRUE(out.remote);
}

TEST(CrepStep, AlphaThRequestMerges) {
  const Params p{4, 2, 2, 3, 4};
  auto s = CrepState::init(p, Configuration::contiguous(p));
  (void)s.handle_request({0, 2, 1});
  (void)s.handle_request({0, 2, 2});
  const auto out = s.handle_request({0, 2, 3});
  EXPECT_EQ(out.merged, (std::vector<ComponentId>{0, 2}));
  EXPECT_FALSE(out.remote);
  EXPECT_EQ(s.component(0).comm_paid, 2);
  // Intra-component requests no longer touch any weight.
  const auto again = s.handle_request({0, 2, 4});
  EXPECT_TRUE(again.moves.empty());
  EXPECT_FALSE(again.remote);
  EXPECT_TRUE(s.weights().empty());
}

TEST(CrepStep, RejectsSelfPair) {
  const Params p{4, 2, 2, 1, 4};
  auto s = CrepState::init(p, Configuration::contiguous(p));
  EXPECT_THROW(s.handle_request({1, 1, 1}), Error);
}

TEST(Crep, DetectsEngineDivergence) {
  const Params p{4, 2, 2, 1, 4};
  const auto initial = Configuration::contiguous(p);
  Crep alg(p, initial);
  const auto wrong = Configuration::from_clusters({{0, 2}, {1, 3}, {}, {}}, 4);
  try {
    (void)alg.on_request(wrong, {0, 1, 1});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::StateDiverged);
  }
}

TEST(CrepInvariants, CorruptedFixturesAreReported) {
  const Params p{4, 2, 2, 1, 4};
  // Every cluster over-committed or full: no spare k anywhere.
  auto s = CrepState::from_parts(p, {comp({0}, 0, 1), comp({1}, 1, 1), comp({2}, 2, 1), comp({3}, 3, 1)}, {});
  for (int c = 0; c < 4; ++c) {
    s.mutable_component(c).reserved = 1;
  }
  s.set_weight(0, 1, 5); // light edge far above alpha
  s.mutable_component(2).comm_paid = 3;
  const auto v = check_invariants(s);
  auto has = [&](const std::string &name) {
    return std::any_of(v.begin(), v.end(), [&](const Violation &x) { return x.invariant == name; });
  };
  EXPECT_TRUE(has("edge-weight"));
  EXPECT_TRUE(has("paid-comm"));
  EXPECT_TRUE(has("merge-exhaustive"));

  auto crowded = CrepState::from_parts(p, {comp({0, 1}, 0, 1), comp({2, 3}, 0, 1)}, {});
  const auto w = check_invariants(crowded);
  EXPECT_TRUE(std::any_of(w.begin(), w.end(), [](const Violation &x) { return x.invariant == "ledger"; }));
}

TEST(CrepDump, CanonicalText) {
  const Params p{4, 2, 2, 1, 4};
  auto s = CrepState::init(p, Configuration::contiguous(p));
  s.set_weight(1, 3, 1);
  const std::string dump = s.dump();
  EXPECT_NE(dump.find("[0] cluster=0 reserved=1 paid=0"), std::string::npos);
  EXPECT_NE(dump.find("1-3 1 paid=0"), std::string::npos);
  EXPECT_NE(dump.find("2 o=0 r=0 f=4"), std::string::npos);
  EXPECT_EQ(dump, CrepState(s).dump());
}

TEST(CeilLog2, SmallValues) {
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(2), 1);
  EXPECT_EQ(ceil_log2(3), 2);
  EXPECT_EQ(ceil_log2(4), 2);
  EXPECT_EQ(ceil_log2(5), 3);
}

// Property sweep: all invariants hold after every step on random workloads.
TEST(CrepProperty, InvariantsHoldOnRandomWorkloads) {
  for (int k : {1, 2, 3, 5}) {
    for (Cost alpha : {1, 2}) {
      for (int l : {2, 3}) {
        const Params p{k * l, k, l, alpha, 4};
        if (p.n < 2) {
          continue;
        }
        Crep alg(p, Configuration::contiguous(p));
        adversary::PlantedPartition src(static_cast<std::uint64_t>(k * 100 + l), p, 0.8, 0.2, 1500);
        std::size_t bad = 0;
        run(alg, src, p, Crep::online_initial(p, Configuration::contiguous(p)), 1500,
            [&](std::size_t, const Configuration &) { bad += check_invariants(alg.state()).size(); });
        EXPECT_EQ(bad, 0U) << "k=" << k << " alpha=" << alpha << " l=" << l;
      }
    }
  }
}

TEST(CrepProperty, EpochsCloseAndStayWithinBounds) {
  const Params p{8, 4, 2, 1, 4};
  Crep alg(p, Configuration::contiguous(p));
  adversary::RandomPairs src(17, p.n, 3000);
  run(alg, src, p, Crep::online_initial(p, Configuration::contiguous(p)), 3000);
  const auto &epochs = alg.state().epochs();
  ASSERT_FALSE(epochs.empty());
  for (const auto &e : epochs) {
    EXPECT_GT(e.volume, p.k);
    EXPECT_LE(2 * e.evicted, e.volume + 2);
  }
}
