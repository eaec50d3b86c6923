#include <gtest/gtest.h>

#include <random>

#include "brp/core.h"
#include "oracles.h"

using namespace brp;

namespace {

Configuration two_by_two(std::vector<std::vector<NodeId>> clusters) {
  return Configuration::from_clusters(clusters, 2);
}

template <typename F> Errc code_of(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no brp::Error thrown";
  return Errc::InvalidSpec;
}

} // namespace

TEST(Params, ValidatesShape) {
  EXPECT_NO_THROW(Params::make(2, 3, 1));
  EXPECT_EQ(code_of([] { Params{5, 2, 2, 1, 1}.validate(); }), Errc::InvalidParams);
  EXPECT_EQ(code_of([] { Params::make(2, 2, 0); }), Errc::InvalidParams);
  EXPECT_EQ(code_of([] { Params::make(2, 2, 1, 0); }), Errc::InvalidParams);
}

TEST(Configuration, ExactFit) {
  const auto c = two_by_two({{0, 1}, {2, 3}});
  EXPECT_EQ(c.cluster_of(2), 1);
  EXPECT_TRUE(c.collocated(0, 1));
  EXPECT_FALSE(c.collocated(1, 2));
  EXPECT_EQ(c.occupancy(0), 2);
}

TEST(Configuration, RejectsBadLayouts) {
  EXPECT_EQ(code_of([] { two_by_two({{0, 1, 2}, {3}}); }), Errc::CapacityExceeded);
  EXPECT_EQ(code_of([] { two_by_two({{0, 1}, {1, 2}}); }), Errc::DuplicateNode);
  EXPECT_EQ(code_of([] { Configuration::from_assignment({0, 0, 5, 1}, 2, 2); }), Errc::UnknownCluster);
  EXPECT_EQ(code_of([] { (void)two_by_two({{0, 1}, {2}}).cluster_of(7); }), Errc::UnknownNode);
}

TEST(Configuration, AugmentedLayoutHasEmptyClusters) {
  const auto c = Configuration::from_clusters({{0, 1}, {2, 3}, {}, {}}, 2);
  EXPECT_EQ(c.cluster_count(), 4);
  EXPECT_EQ(c.occupancy(2), 0);
  EXPECT_TRUE(c.members(3).empty());
}

TEST(Configuration, WidenedKeepsAssignment) {
  const auto c = Configuration::contiguous(Params::make(2, 2, 1));
  const auto w = c.widened(4, 4);
  EXPECT_EQ(w.cluster_count(), 4);
  EXPECT_EQ(w.cluster_capacity(), 4);
  EXPECT_TRUE(std::equal(c.assignment().begin(), c.assignment().end(), w.assignment().begin()));
}

TEST(Configuration, CanonicalGroupsIgnoreLabels) {
  const auto a = two_by_two({{0, 1}, {2, 3}});
  const auto b = two_by_two({{2, 3}, {0, 1}});
  EXPECT_EQ(a.canonical_groups(), b.canonical_groups());
  EXPECT_NE(a.digest(), b.digest()); // digest is over the labelled form
}

TEST(ServeCost, CollocationAndSymmetry) {
  const auto c = two_by_two({{0, 1}, {2, 3}});
  EXPECT_EQ(serve_cost(c, {0, 1}), 0);
  EXPECT_EQ(serve_cost(c, {0, 2}), 1);
  EXPECT_EQ(serve_cost(c, {2, 0}), serve_cost(c, {0, 2}));
  EXPECT_EQ(code_of([&] { (void)serve_cost(c, {1, 1}); }), Errc::InvalidRequest);
  EXPECT_EQ(code_of([&] { (void)serve_cost(c, {1, 9}); }), Errc::UnknownNode);
}

TEST(ApplyMoves, SwapCostsTwoAlpha) {
  const auto c = two_by_two({{0, 1}, {2, 3}});
  const std::vector<Move> swap = {{1, 1}, {2, 0}};
  const auto r = apply_moves(c, swap, 3);
  EXPECT_EQ(r.cost, 6);
  EXPECT_EQ(r.moved, 2);
  EXPECT_TRUE(r.config.collocated(0, 2));
}

TEST(ApplyMoves, IdentityAndNoOps) {
  const auto c = two_by_two({{0, 1}, {2, 3}});
  EXPECT_EQ(apply_moves(c, {}, 1).cost, 0);
  EXPECT_EQ(apply_moves(c, {}, 1).config, c);
  const std::vector<Move> stay = {{0, 0}};
  EXPECT_EQ(apply_moves(c, stay, 1).cost, 0);
}

TEST(ApplyMoves, CapacityCheckedOnResult) {
  const auto c = two_by_two({{0, 1}, {2, 3}});
  const std::vector<Move> lone = {{0, 1}};
  EXPECT_EQ(code_of([&] { (void)apply_moves(c, lone, 1); }), Errc::CapacityExceeded);
  const std::vector<Move> unknown = {{8, 1}};
  EXPECT_EQ(code_of([&] { (void)apply_moves(c, unknown, 1); }), Errc::UnknownNode);
}

TEST(ApplyMoves, LastTargetWins) {
  const auto c = Configuration::from_clusters({{0, 1}, {2}, {}}, 2);
  const std::vector<Move> moves = {{0, 1}, {0, 2}};
  const auto r = apply_moves(c, moves, 1);
  EXPECT_EQ(r.config.cluster_of(0), 2);
  EXPECT_EQ(r.cost, 1);
}

TEST(ApplyMoves, CostIsAlphaTimesHamming) {
  std::mt19937_64 rng(11);
  const Params p = Params::make(3, 3, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<NodeId> order(p.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<ClusterId> target(p.n);
    for (int i = 0; i < p.n; ++i) {
      target[order[i]] = i / p.k;
    }
    const auto from = Configuration::contiguous(p);
    std::vector<Move> moves;
    int hamming = 0;
    for (NodeId v = 0; v < p.n; ++v) {
      moves.push_back({v, target[v]});
      hamming += target[v] != from.cluster_of(v) ? 1 : 0;
    }
    EXPECT_EQ(apply_moves(from, moves, p.alpha).cost, p.alpha * hamming);
  }
}

TEST(MinMigrationCost, Examples) {
  const auto a = two_by_two({{0, 1}, {2, 3}});
  EXPECT_EQ(min_migration_cost(a, a, 1), 0);
  EXPECT_EQ(min_migration_cost(a, two_by_two({{2, 3}, {0, 1}}), 1), 0);
  EXPECT_EQ(min_migration_cost(a, two_by_two({{0, 2}, {1, 3}}), 1), 2);
  EXPECT_EQ(min_migration_cost(a, two_by_two({{0, 2}, {1, 3}}), 5), 10);
  const auto other = Configuration::from_clusters({{0, 1}, {2, 3}, {}}, 2);
  EXPECT_EQ(code_of([&] { (void)min_migration_cost(a, other, 1); }), Errc::ShapeMismatch);
}

// Pseudometric on n=4, k=2 by exhaustion over every labelled layout.
TEST(MinMigrationCost, PseudometricOnSmallSpace) {
  std::vector<Configuration> all;
  std::vector<ClusterId> a(4, 0);
  for (int mask = 0; mask < 16; ++mask) {
    if (__builtin_popcount(mask) != 2) {
      continue;
    }
    for (int v = 0; v < 4; ++v) {
      a[v] = (mask >> v) & 1;
    }
    all.push_back(Configuration::from_assignment(a, 2, 2));
  }
  ASSERT_EQ(all.size(), 6U);
  for (const auto &x : all) {
    for (const auto &y : all) {
      const int d = min_moves(x, y);
      EXPECT_EQ(d, oracle::brute_min_moves(x, y));
      EXPECT_EQ(d, min_moves(y, x));
      if (x.canonical_groups() == y.canonical_groups()) {
        EXPECT_EQ(d, 0);
      }
      for (const auto &z : all) {
        EXPECT_LE(d, min_moves(x, z) + min_moves(z, y));
      }
    }
  }
}

TEST(MinMoves, MatchesBruteForceRandom) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 3);
    const int l = 2 + static_cast<int>(rng() % 4);
    const Params p = Params::make(k, l, 1);
    std::vector<NodeId> order(p.n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<ClusterId> x(p.n);
    std::vector<ClusterId> y(p.n);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < p.n; ++i) {
      x[order[i]] = i / k;
    }
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < p.n; ++i) {
      y[order[i]] = i / k;
    }
    const auto cx = Configuration::from_assignment(x, l, k);
    const auto cy = Configuration::from_assignment(y, l, k);
    EXPECT_EQ(min_moves(cx, cy), oracle::brute_min_moves(cx, cy));
  }
}

TEST(MaxAssignment, HungarianAgreesWithExhaustive) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 7; // <= 8: exhaustive
    std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n));
    for (auto &row : w) {
      for (auto &x : row) {
        x = static_cast<std::int64_t>(rng() % 10);
      }
    }
    const auto expected = max_assignment(w);
    // Zero padding to 9+ columns forces the Hungarian path; the optimum is unchanged.
    auto padded = w;
    const std::size_t m = 9 + rng() % 3;
    for (auto &row : padded) {
      row.resize(m, 0);
    }
    padded.resize(m, std::vector<std::int64_t>(m, 0));
    EXPECT_EQ(max_assignment(padded), expected);
  }
}

TEST(CostLedger, Totals) {
  CostLedger ledger;
  ledger.record(1, 0);
  ledger.record(0, 4);
  EXPECT_EQ(ledger.comm, 1);
  EXPECT_EQ(ledger.mig, 4);
  EXPECT_EQ(ledger.total(), 5);
  EXPECT_EQ(ledger.per_step.size(), 2U);
}
