#include "brp/core.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace brp {

std::string_view to_string(Errc code) {
  switch (code) {
  case Errc::InvalidParams: return "InvalidParams";
  case Errc::InvalidRequest: return "InvalidRequest";
  case Errc::CapacityExceeded: return "CapacityExceeded";
  case Errc::DuplicateNode: return "DuplicateNode";
  case Errc::UnknownCluster: return "UnknownCluster";
  case Errc::UnknownNode: return "UnknownNode";
  case Errc::ShapeMismatch: return "ShapeMismatch";
  case Errc::AdversaryStuck: return "AdversaryStuck";
  case Errc::InsufficientAugmentation: return "InsufficientAugmentation";
  case Errc::NoEligibleCluster: return "NoEligibleCluster";
  case Errc::GeometryError: return "GeometryError";
  case Errc::StateDiverged: return "StateDiverged";
  case Errc::TooLarge: return "TooLarge";
  case Errc::MalformedProfile: return "MalformedProfile";
  case Errc::MalformedPagingSequence: return "MalformedPagingSequence";
  case Errc::BadProbability: return "BadProbability";
  case Errc::ParseError: return "ParseError";
  case Errc::NodeOutOfRange: return "NodeOutOfRange";
  case Errc::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

void Params::validate() const {
  if (k < 1 || l < 1) {
    throw Error(Errc::InvalidParams, "k and l must be positive");
  }
  if (n != k * l) {
    throw Error(
        Errc::InvalidParams,
        "n must equal k*l (n=" + std::to_string(n) + ", k=" + std::to_string(k) +
            ", l=" + std::to_string(l) + ")"
    );
  }
  if (alpha < 1) {
    throw Error(Errc::InvalidParams, "alpha must be a positive integer");
  }
  if (delta < 1) {
    throw Error(Errc::InvalidParams, "delta must be at least 1");
  }
}

Configuration
Configuration::from_clusters(const std::vector<std::vector<NodeId>> &clusters, int cluster_capacity) {
  std::size_t n = 0;
  for (const auto &members : clusters) {
    n += members.size();
  }

  Configuration config;
  config._cluster_count = static_cast<int>(clusters.size());
  config._capacity = cluster_capacity;
  config._assignment.assign(n, -1);
  config._occupancy.assign(clusters.size(), 0);

  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const NodeId node : clusters[c]) {
      if (node < 0 || static_cast<std::size_t>(node) >= n) {
        throw Error(
            Errc::UnknownNode,
            "node " + std::to_string(node) + " outside 0.." + std::to_string(n) + "-1"
        );
      }
      if (config._assignment[node] != -1) {
        throw Error(Errc::DuplicateNode, "node " + std::to_string(node) + " listed twice");
      }
      config._assignment[node] = static_cast<ClusterId>(c);
      ++config._occupancy[c];
    }
  }
  config.validate();
  return config;
}

Configuration Configuration::from_assignment(
    std::vector<ClusterId> assignment, int cluster_count, int cluster_capacity
) {
  Configuration config;
  config._cluster_count = cluster_count;
  config._capacity = cluster_capacity;
  config._occupancy.assign(std::max(cluster_count, 0), 0);
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    const ClusterId c = assignment[v];
    if (c < 0 || c >= cluster_count) {
      throw Error(
          Errc::UnknownCluster,
          "node " + std::to_string(v) + " assigned to cluster " + std::to_string(c)
      );
    }
    ++config._occupancy[c];
  }
  config._assignment = std::move(assignment);
  config.validate();
  return config;
}

Configuration Configuration::contiguous(const Params &params) {
  params.validate();
  std::vector<ClusterId> assignment(params.n);
  for (NodeId v = 0; v < params.n; ++v) {
    assignment[v] = v / params.k;
  }
  return from_assignment(std::move(assignment), params.l, params.k);
}

void Configuration::validate() const {
  if (_cluster_count < 1 || _capacity < 1) {
    throw Error(Errc::InvalidParams, "configuration needs at least one cluster of positive capacity");
  }
  for (int c = 0; c < _cluster_count; ++c) {
    if (_occupancy[c] > _capacity) {
      throw Error(
          Errc::CapacityExceeded,
          "cluster " + std::to_string(c) + " holds " + std::to_string(_occupancy[c]) +
              " nodes, capacity " + std::to_string(_capacity)
      );
    }
  }
}

ClusterId Configuration::cluster_of(const NodeId node) const {
  if (node < 0 || node >= node_count()) {
    throw Error(Errc::UnknownNode, "node " + std::to_string(node));
  }
  return _assignment[node];
}

int Configuration::occupancy(const ClusterId cluster) const {
  if (cluster < 0 || cluster >= _cluster_count) {
    throw Error(Errc::UnknownCluster, "cluster " + std::to_string(cluster));
  }
  return _occupancy[cluster];
}

std::vector<NodeId> Configuration::members(const ClusterId cluster) const {
  (void)occupancy(cluster); // bounds check
  std::vector<NodeId> out;
  for (NodeId v = 0; v < node_count(); ++v) {
    if (_assignment[v] == cluster) {
      out.push_back(v);
    }
  }
  return out;
}

Configuration Configuration::widened(const int cluster_count, const int cluster_capacity) const {
  if (cluster_count < _cluster_count) {
    throw Error(Errc::ShapeMismatch, "cannot shrink cluster count");
  }
  return from_assignment(_assignment, cluster_count, cluster_capacity);
}

std::vector<std::vector<NodeId>> Configuration::canonical_groups() const {
  std::vector<std::vector<NodeId>> groups(_cluster_count);
  for (NodeId v = 0; v < node_count(); ++v) {
    groups[_assignment[v]].push_back(v);
  }
  std::erase_if(groups, [](const auto &g) { return g.empty(); });
  std::sort(groups.begin(), groups.end());
  return groups;
}

std::uint64_t Configuration::digest() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t value) {
    for (int i = 0; i < 4; ++i) {
      h ^= (value >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(_cluster_count));
  mix(static_cast<std::uint64_t>(_capacity));
  for (const ClusterId c : _assignment) {
    mix(static_cast<std::uint64_t>(c));
  }
  return h;
}

int serve_cost(const Configuration &config, const Request &request) {
  if (request.u == request.v) {
    throw Error(Errc::InvalidRequest, "self-pair {" + std::to_string(request.u) + "}");
  }
  return config.cluster_of(request.u) == config.cluster_of(request.v) ? 0 : 1;
}

MoveResult apply_moves(const Configuration &config, std::span<const Move> moves, const Cost alpha) {
  std::vector<ClusterId> assignment(config.assignment().begin(), config.assignment().end());
  for (const Move &move : moves) {
    (void)config.cluster_of(move.node); // bounds check
    if (move.target < 0 || move.target >= config.cluster_count()) {
      throw Error(Errc::UnknownCluster, "move target " + std::to_string(move.target));
    }
    assignment[move.node] = move.target;
  }

  int moved = 0;
  for (NodeId v = 0; v < config.node_count(); ++v) {
    moved += assignment[v] != config.assignment()[v];
  }

  MoveResult result;
  result.config = Configuration::from_assignment(
      std::move(assignment), config.cluster_count(), config.cluster_capacity()
  );
  result.moved = moved;
  result.cost = alpha * moved;
  return result;
}

namespace {

std::int64_t max_assignment_exhaustive(const std::vector<std::vector<std::int64_t>> &weight) {
  const std::size_t size = weight.size();
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  do {
    std::int64_t sum = 0;
    for (std::size_t r = 0; r < size; ++r) {
      sum += weight[r][perm[r]];
    }
    best = std::max(best, sum);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Hungarian method (potentials, O(n^3)) on costs = max - weight.
std::int64_t max_assignment_hungarian(const std::vector<std::vector<std::int64_t>> &weight) {
  const std::size_t size = weight.size();
  std::int64_t top = 0;
  for (const auto &row : weight) {
    for (const auto w : row) {
      top = std::max(top, w);
    }
  }
  auto cost = [&](std::size_t r, std::size_t c) { return top - weight[r - 1][c - 1]; };

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(size + 1, 0), v(size + 1, 0);
  std::vector<std::size_t> match(size + 1, 0), way(size + 1, 0);
  for (std::size_t row = 1; row <= size; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<std::int64_t> minv(size + 1, kInf);
    std::vector<bool> used(size + 1, false);
    do {
      used[col0] = true;
      const std::size_t row0 = match[col0];
      std::int64_t delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= size; ++col) {
        if (used[col]) {
          continue;
        }
        const std::int64_t cur = cost(row0, col) - u[row0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= size; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::int64_t total = 0;
  for (std::size_t col = 1; col <= size; ++col) {
    total += weight[match[col] - 1][col - 1];
  }
  return total;
}

} // namespace

std::int64_t max_assignment(const std::vector<std::vector<std::int64_t>> &weight) {
  if (weight.empty()) {
    return 0;
  }
  return weight.size() <= 8 ? max_assignment_exhaustive(weight) : max_assignment_hungarian(weight);
}

int min_moves(const Configuration &from, const Configuration &to) {
  if (from.node_count() != to.node_count() || from.cluster_count() != to.cluster_count() ||
      from.cluster_capacity() != to.cluster_capacity()) {
    throw Error(Errc::ShapeMismatch, "configurations differ in shape");
  }
  const auto clusters = static_cast<std::size_t>(from.cluster_count());
  std::vector<std::vector<std::int64_t>> overlap(clusters, std::vector<std::int64_t>(clusters, 0));
  for (NodeId v = 0; v < from.node_count(); ++v) {
    ++overlap[from.assignment()[v]][to.assignment()[v]];
  }
  return from.node_count() - static_cast<int>(max_assignment(overlap));
}

Cost min_migration_cost(const Configuration &from, const Configuration &to, const Cost alpha) {
  return alpha * min_moves(from, to);
}

} // namespace brp
