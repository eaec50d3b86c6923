#include "brp/offline.h"

#include <algorithm>
#include <limits>
#include <numeric>

namespace brp::offline {

namespace {

void expect_full_geometry(const Params &params, const Configuration &initial) {
  params.validate();
  if (initial.node_count() != params.n || initial.cluster_capacity() != params.k) {
    throw Error(Errc::ShapeMismatch, "offline runs on the unaugmented l x k geometry");
  }
}

// Serve cost of a request in partition `p`.
Cost serve(const Configuration &p, const Request &r) { return p.collocated(r.u, r.v) ? 0 : 1; }

} // namespace

std::uint64_t partition_count(int n, int k, int l) {
  // Product over groups of C(remaining - 1, k - 1).
  unsigned __int128 total = 1;
  int remaining = n;
  for (int g = 0; g < l; ++g) {
    unsigned __int128 choose = 1;
    for (int i = 1; i <= k - 1; ++i) {
      choose = choose * static_cast<unsigned>(remaining - i) / static_cast<unsigned>(i);
    }
    total *= choose;
    if (total > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    remaining -= k;
  }
  return static_cast<std::uint64_t>(total);
}

PartitionSpace enumerate_partitions(int n, int k, int l, std::size_t cap) {
  Params::make(k, l, 1).validate();
  if (n != k * l) {
    throw Error(Errc::InvalidParams, "n must equal k * l");
  }
  if (partition_count(n, k, l) > cap) {
    throw Error(
        Errc::TooLarge,
        std::to_string(partition_count(n, k, l)) + " partitions exceed the cap of " + std::to_string(cap)
    );
  }

  PartitionSpace space;
  std::vector<ClusterId> assign(n, -1);
  // Fills group g with `need` more members chosen above `from`.
  auto fill = [&](auto &&self, int group, int need, NodeId from) -> void {
    if (need == 0) {
      if (group + 1 == l) {
        Configuration p = Configuration::from_assignment(assign, l, k);
        space._index.emplace(p.canonical_groups(), space._partitions.size());
        space._partitions.push_back(std::move(p));
        return;
      }
      const auto open = static_cast<NodeId>(std::find(assign.begin(), assign.end(), -1) - assign.begin());
      assign[open] = group + 1;
      self(self, group + 1, k - 1, open + 1);
      assign[open] = -1;
      return;
    }
    for (NodeId v = from; v < n; ++v) {
      if (assign[v] == -1) {
        assign[v] = group;
        self(self, group, need - 1, v + 1);
        assign[v] = -1;
      }
    }
  };
  assign[0] = 0;
  fill(fill, 0, k - 1, 1);
  return space;
}

std::size_t PartitionSpace::index_of(const Configuration &config) const {
  const auto it = _index.find(config.canonical_groups());
  if (it == _index.end()) {
    throw Error(Errc::ShapeMismatch, "configuration is not a partition of this space");
  }
  return it->second;
}

int PartitionSpace::moves(std::size_t i, std::size_t j) const {
  return min_moves(_partitions.at(i), _partitions.at(j));
}

std::vector<std::uint8_t> PartitionSpace::moves_matrix() const {
  const std::size_t p = size();
  std::vector<std::uint8_t> m(p * p, 0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const auto value = static_cast<std::uint8_t>(moves(i, j));
      m[i * p + j] = value;
      m[j * p + i] = value;
    }
  }
  return m;
}

Solution optimal_cost(
    std::span<const Request> sigma,
    const Params &params,
    const Configuration &initial,
    std::size_t cap
) {
  expect_full_geometry(params, initial);
  if (sigma.empty()) {
    return {};
  }
  const PartitionSpace space = enumerate_partitions(params.n, params.k, params.l, cap);
  const std::size_t p = space.size();
  const std::size_t start = space.index_of(initial);
  const std::vector<std::uint8_t> moves = space.moves_matrix();
  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;

  std::vector<Cost> dist(p, kInf);
  std::vector<Cost> next(p);
  std::vector<std::vector<std::uint32_t>> parent(sigma.size(), std::vector<std::uint32_t>(p));
  dist[start] = 0;
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    for (std::size_t j = 0; j < p; ++j) {
      Cost best = kInf;
      std::uint32_t arg = 0;
      for (std::size_t i = 0; i < p; ++i) {
        if (dist[i] >= kInf) {
          continue;
        }
        const Cost c = dist[i] + params.alpha * moves[i * p + j];
        if (c < best) {
          best = c;
          arg = static_cast<std::uint32_t>(i);
        }
      }
      next[j] = best + serve(space[j], sigma[t]);
      parent[t][j] = arg;
    }
    dist.swap(next);
  }

  Solution solution;
  std::size_t state = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
  solution.cost = dist[state];
  solution.schedule.resize(sigma.size());
  for (std::size_t t = sigma.size(); t-- > 0;) {
    solution.schedule[t] = space[state];
    state = parent[t][state];
  }
  return solution;
}

StaticSolution static_optimal(
    std::span<const Request> sigma,
    const Params &params,
    const Configuration &initial,
    std::size_t cap
) {
  expect_full_geometry(params, initial);
  const PartitionSpace space = enumerate_partitions(params.n, params.k, params.l, cap);
  const Configuration start = space[space.index_of(initial)];
  StaticSolution best{initial, std::numeric_limits<Cost>::max()};
  for (const Configuration &p : space.partitions()) {
    Cost cost = 0;
    for (const Request &r : sigma) {
      cost += serve(p, r);
    }
    if (cost >= best.cost) {
      continue;
    }
    cost += min_migration_cost(start, p, params.alpha);
    if (cost < best.cost) {
      best = {p, cost};
    }
  }
  return best;
}

Cost schedule_cost(
    std::span<const Request> sigma,
    const Params &params,
    const Configuration &initial,
    std::span<const Configuration> schedule
) {
  if (schedule.size() != sigma.size()) {
    throw Error(Errc::ShapeMismatch, "schedule needs one configuration per request");
  }
  Cost cost = 0;
  const Configuration *previous = &initial;
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    cost += min_migration_cost(*previous, schedule[t], params.alpha) + serve(schedule[t], sigma[t]);
    previous = &schedule[t];
  }
  return cost;
}

namespace {

// Fewest nodes that change group, trying every relabelling explicitly.
int brute_moves(std::span<const ClusterId> a, std::span<const ClusterId> b, int clusters) {
  std::vector<int> perm(clusters);
  std::iota(perm.begin(), perm.end(), 0);
  int best = static_cast<int>(a.size());
  do {
    int moved = 0;
    for (std::size_t v = 0; v < a.size(); ++v) {
      moved += perm[a[v]] != b[v] ? 1 : 0;
    }
    best = std::min(best, moved);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

} // namespace

Cost exhaustive_optimal(std::span<const Request> sigma, const Params &params, const Configuration &initial) {
  expect_full_geometry(params, initial);
  if (sigma.size() > 8) {
    throw Error(Errc::TooLarge, "exhaustive search is limited to 8 requests");
  }
  const PartitionSpace space = enumerate_partitions(params.n, params.k, params.l, 30);
  const std::size_t p = space.size();
  double work = 1;
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    work *= static_cast<double>(p);
  }
  if (work > 2e8) {
    throw Error(Errc::TooLarge, "exhaustive search space too large");
  }
  if (sigma.empty()) {
    return 0;
  }

  // Row 0 is the initial configuration, rows 1..p the partitions.
  std::vector<std::vector<Cost>> step(p + 1, std::vector<Cost>(p));
  for (std::size_t j = 0; j < p; ++j) {
    step[0][j] = params.alpha * brute_moves(initial.assignment(), space[j].assignment(), params.l);
    for (std::size_t i = 0; i < p; ++i) {
      step[i + 1][j] =
          params.alpha * brute_moves(space[i].assignment(), space[j].assignment(), params.l);
    }
  }
  std::vector<std::vector<Cost>> serve_in(sigma.size(), std::vector<Cost>(p));
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    for (std::size_t j = 0; j < p; ++j) {
      const auto groups = space[j].assignment();
      serve_in[t][j] = groups[sigma[t].u] == groups[sigma[t].v] ? 0 : 1;
    }
  }

  Cost best = std::numeric_limits<Cost>::max();
  auto walk = [&](auto &&self, std::size_t t, std::size_t row, Cost acc) -> void {
    if (t == sigma.size()) {
      best = std::min(best, acc);
      return;
    }
    for (std::size_t j = 0; j < p; ++j) {
      self(self, t + 1, j + 1, acc + step[row][j] + serve_in[t][j]);
    }
  };
  walk(walk, 0, 0, 0);
  return best;
}

Cost ReferenceCosts::min() const { return std::min({never, first, each}); }

ReferenceCosts reference_strategies_k2(std::span<const Cost> profile, Cost alpha) {
  if (profile.empty()) {
    throw Error(Errc::MalformedProfile, "empty phase profile");
  }
  ReferenceCosts costs;
  for (std::size_t p = 0; p < profile.size(); ++p) {
    if (profile[p] <= 0) {
      throw Error(Errc::MalformedProfile, "phase " + std::to_string(p + 1) + " has no requests");
    }
    // Phases are 1-based: index 0 is phase 1 (odd).
    (p % 2 == 0 ? costs.never : costs.first) += profile[p];
  }
  costs.first += 2 * alpha;
  costs.each = 2 * alpha * static_cast<Cost>(profile.size());
  return costs;
}

} // namespace brp::offline
