#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "brp/types.h"

namespace brp {

/// Instance constants. `k` and `l` describe the offline geometry; `delta` is
/// the augmentation granted to the online side only.
struct Params {
  int n = 0;
  int k = 0;
  int l = 0;
  Cost alpha = 1;
  int delta = 1;

  /// Throws Errc::InvalidParams unless n = k*l, k,l >= 1, alpha >= 1, delta >= 1.
  void validate() const;

  static Params make(int k, int l, Cost alpha, int delta = 1) {
    Params p{k * l, k, l, alpha, delta};
    p.validate();
    return p;
  }
};

struct Request {
  NodeId u = 0;
  NodeId v = 0;
  std::int64_t t = 0; // 1-based, stamped by the engine

  friend bool operator==(const Request &a, const Request &b) {
    return a.u == b.u && a.v == b.v && a.t == b.t;
  }
};

struct Move {
  NodeId node = 0;
  ClusterId target = 0;

  friend bool operator==(const Move &, const Move &) = default;
};

/// Node-to-cluster assignment with capacity bookkeeping. Labels are
/// significant here; label symmetry is only quotiented by min_migration_cost.
class Configuration {
public:
  Configuration() = default;

  /// `clusters[c]` lists the nodes of cluster c. Node ids must be exactly
  /// 0..n-1, each listed once.
  static Configuration
  from_clusters(const std::vector<std::vector<NodeId>> &clusters, int cluster_capacity);

  static Configuration
  from_assignment(std::vector<ClusterId> assignment, int cluster_count, int cluster_capacity);

  /// Offline layout for `params`: cluster c holds nodes c*k .. c*k+k-1.
  static Configuration contiguous(const Params &params);

  [[nodiscard]] int node_count() const { return static_cast<int>(_assignment.size()); }
  [[nodiscard]] int cluster_count() const { return _cluster_count; }
  [[nodiscard]] int cluster_capacity() const { return _capacity; }

  [[nodiscard]] ClusterId cluster_of(NodeId node) const;
  [[nodiscard]] bool collocated(NodeId a, NodeId b) const { return cluster_of(a) == cluster_of(b); }
  [[nodiscard]] int occupancy(ClusterId cluster) const;
  [[nodiscard]] std::vector<NodeId> members(ClusterId cluster) const;
  [[nodiscard]] std::span<const ClusterId> assignment() const { return _assignment; }

  /// Same assignment embedded into a larger geometry (augmentation).
  [[nodiscard]] Configuration widened(int cluster_count, int cluster_capacity) const;

  /// Canonical label-free form: clusters as sorted node lists, sorted by
  /// their smallest member, empty clusters dropped.
  [[nodiscard]] std::vector<std::vector<NodeId>> canonical_groups() const;

  /// FNV-1a over the labelled assignment.
  [[nodiscard]] std::uint64_t digest() const;

  friend bool operator==(const Configuration &a, const Configuration &b) {
    return a._cluster_count == b._cluster_count && a._capacity == b._capacity &&
           a._assignment == b._assignment;
  }

private:
  void validate() const;

  std::vector<ClusterId> _assignment;
  std::vector<int> _occupancy;
  int _cluster_count = 0;
  int _capacity = 0;
};

/// Cumulative cost of one agent. `per_step[t-1]` holds step t.
struct CostLedger {
  struct Step {
    Cost comm = 0;
    Cost mig = 0;
  };

  Cost comm = 0;
  Cost mig = 0;
  std::vector<Step> per_step;

  void record(Cost comm_t, Cost mig_t) {
    comm += comm_t;
    mig += mig_t;
    per_step.push_back({comm_t, mig_t});
  }

  [[nodiscard]] Cost total() const { return comm + mig; }
};

/// 0 if both endpoints share a cluster, 1 otherwise.
int serve_cost(const Configuration &config, const Request &request);

struct MoveResult {
  Configuration config;
  Cost cost = 0;
  int moved = 0;
};

/// Applies all moves as one batch; capacities are checked on the result only,
/// so swaps are expressible in full clusters. A node listed twice ends up at
/// its last target. Cost is alpha per node whose cluster actually changed.
MoveResult apply_moves(const Configuration &config, std::span<const Move> moves, Cost alpha);

/// Number of nodes that must change cluster to turn `from` into `to` under
/// the best relabelling of clusters.
int min_moves(const Configuration &from, const Configuration &to);

/// alpha * min_moves(from, to).
Cost min_migration_cost(const Configuration &from, const Configuration &to, Cost alpha);

/// Maximum total weight of a perfect matching in a square matrix
/// (rows -> distinct columns). Exhaustive for size <= 8, Hungarian otherwise.
std::int64_t max_assignment(const std::vector<std::vector<std::int64_t>> &weight);

} // namespace brp
