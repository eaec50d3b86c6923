#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "brp/core.h"

namespace brp::offline {

inline constexpr std::size_t kPartitionCap = 100000;
/// The DP keeps a full transition matrix, so it has a tighter cap.
inline constexpr std::size_t kDpCap = 4096;

/// Every partition of n nodes into l unordered groups of k, in canonical
/// order (the lowest unplaced node always opens the next group). Partition i
/// is stored as a configuration whose cluster c is its c-th group.
class PartitionSpace {
public:
  [[nodiscard]] std::size_t size() const { return _partitions.size(); }
  [[nodiscard]] const Configuration &operator[](std::size_t i) const { return _partitions[i]; }
  [[nodiscard]] const std::vector<Configuration> &partitions() const { return _partitions; }

  /// Index of the partition `config` induces (labels ignored). Throws
  /// ShapeMismatch for configurations outside the space.
  [[nodiscard]] std::size_t index_of(const Configuration &config) const;

  /// Node moves between partitions i and j under the best relabelling.
  [[nodiscard]] int moves(std::size_t i, std::size_t j) const;

  /// Full symmetric moves matrix (row-major, size()^2 entries).
  [[nodiscard]] std::vector<std::uint8_t> moves_matrix() const;

private:
  friend PartitionSpace enumerate_partitions(int n, int k, int l, std::size_t cap);

  std::vector<Configuration> _partitions;
  std::map<std::vector<std::vector<NodeId>>, std::size_t> _index;
};

/// Throws TooLarge when the count exceeds `cap`.
PartitionSpace enumerate_partitions(int n, int k, int l, std::size_t cap = kPartitionCap);

/// n! / ((k!)^l * l!), saturating at UINT64_MAX.
std::uint64_t partition_count(int n, int k, int l);

struct Solution {
  Cost cost = 0;
  /// schedule[t] is the partition request t+1 is served in.
  std::vector<Configuration> schedule;
};

/// Exact offline optimum on the unaugmented l x k geometry, starting from the
/// partition `initial` induces: per-step relaxation over all partition pairs.
Solution optimal_cost(
    std::span<const Request> sigma,
    const Params &params,
    const Configuration &initial,
    std::size_t cap = kDpCap
);

struct StaticSolution {
  Configuration partition;
  Cost cost = 0;
};

/// Best single partition: one migration from `initial`, then never again.
StaticSolution static_optimal(
    std::span<const Request> sigma,
    const Params &params,
    const Configuration &initial,
    std::size_t cap = kPartitionCap
);

/// Cost of serving sigma along a given schedule (one configuration per
/// request), migrations priced by min_migration_cost.
Cost schedule_cost(
    std::span<const Request> sigma,
    const Params &params,
    const Configuration &initial,
    std::span<const Configuration> schedule
);

/// Brute force over every state sequence. Independent of optimal_cost: it
/// prices transitions by trying every cluster relabelling directly.
/// Limits: |sigma| <= 8, at most 30 partitions, size^|sigma| <= 2e8.
Cost exhaustive_optimal(std::span<const Request> sigma, const Params &params, const Configuration &initial);

struct ReferenceCosts {
  Cost never = 0; // no moves at all
  Cost first = 0; // one swap at the start of phase 1
  Cost each = 0;  // swap to serve every phase locally

  [[nodiscard]] Cost min() const;
};

/// Costs of the three comparison strategies for a k=2 phase profile
/// (w_1..w_lambda requests per phase). Throws MalformedProfile if empty or
/// any w_p <= 0.
ReferenceCosts reference_strategies_k2(std::span<const Cost> profile, Cost alpha);

} // namespace brp::offline
