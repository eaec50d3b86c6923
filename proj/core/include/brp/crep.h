#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brp/core.h"
#include "brp/engine.h"

namespace brp::crep {

/// A component is identified by its smallest member node.
using ComponentId = NodeId;

/// Dense snapshot of a weighted component graph, indexed 0..size()-1 in
/// ascending id order. This is what the two set searches operate on.
struct SubsetGraph {
  std::vector<ComponentId> ids;
  std::vector<int> volume;
  std::vector<std::vector<Cost>> weight; // symmetric, zero diagonal

  [[nodiscard]] std::size_t size() const { return ids.size(); }
};

/// Largest-cardinality X with vol(X) <= k and com(X) >= (|X|-1)*alpha.
/// Ties: larger com(X), then the lexicographically smallest sorted id tuple.
/// Returns {} when no set with |X| >= 2 qualifies.
std::vector<ComponentId> find_merge_set(const SubsetGraph &graph, int k, Cost alpha);

/// Inclusion-minimal Y with vol(Y) > k and com(Y) >= vol(Y)*alpha; among
/// those the smallest |Y|, then the smallest vol(Y), then lexicographic.
/// Returns {} when none exists.
std::vector<ComponentId> find_epoch_set(const SubsetGraph &graph, int k, Cost alpha);

struct Component {
  ComponentId id = 0;
  std::vector<NodeId> nodes; // sorted
  ClusterId cluster = 0;
  int reserved = 0;  // reservation still available in `cluster`
  Cost comm_paid = 0; // remote serves among its nodes in the current epoch

  [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }
};

struct ClusterSpace {
  int occupied = 0;
  int reserved = 0;
  int spare = 0;
};

/// Closing summary of one Y-epoch.
struct EpochRecord {
  std::int64_t t = 0;
  std::vector<ComponentId> components;
  int volume = 0;
  Cost merge_migrations = 0; // node moves caused by merges, nodes of Y, this epoch
  Cost remote_serves = 0;    // requests among nodes of Y served remotely this epoch
  int evicted = 0;           // singletons relocated while closing
};

struct StepOutcome {
  std::vector<Move> moves; // net moves for the step (node -> final cluster)
  std::vector<ComponentId> merged;
  std::vector<ComponentId> epoch;
  bool remote = false; // request served across clusters after the moves
};

/// Full CREP state on the 4-augmented geometry: 2l clusters of capacity 2k.
class CrepState {
public:
  /// `initial` is the offline placement (l clusters of k nodes); it is
  /// mirrored into the first l online clusters. Requires delta >= 4.
  static CrepState init(const Params &params, const Configuration &initial);

  /// Builds an arbitrary state (fixtures, corrupted-state tests). Components
  /// must partition 0..n-1; no consistency checks beyond that.
  static CrepState from_parts(
      const Params &params,
      std::vector<Component> components,
      const std::vector<std::pair<std::pair<ComponentId, ComponentId>, Cost>> &weights
  );

  [[nodiscard]] const Params &params() const { return _params; }
  [[nodiscard]] int k() const { return _params.k; }
  [[nodiscard]] Cost alpha() const { return _params.alpha; }
  [[nodiscard]] int cluster_count() const { return 2 * _params.l; }
  [[nodiscard]] int cluster_capacity() const { return 2 * _params.k; }

  [[nodiscard]] Configuration configuration() const;
  [[nodiscard]] std::span<const ClusterId> assignment() const { return _assignment; }
  [[nodiscard]] const std::map<ComponentId, Component> &components() const { return _components; }
  [[nodiscard]] const Component &component(ComponentId id) const;
  [[nodiscard]] ComponentId component_of(NodeId node) const { return _component_of.at(node); }
  [[nodiscard]] Cost weight(ComponentId a, ComponentId b) const;
  [[nodiscard]] Cost paid(ComponentId a, ComponentId b) const;
  [[nodiscard]] const std::map<std::pair<ComponentId, ComponentId>, Cost> &weights() const {
    return _weight;
  }
  [[nodiscard]] int merge_migrations(NodeId node) const { return _merge_moves.at(node); }
  [[nodiscard]] const std::vector<EpochRecord> &epochs() const { return _epochs; }

  [[nodiscard]] SubsetGraph subset_graph() const;
  [[nodiscard]] std::vector<ClusterSpace> cluster_ledger() const;

  /// Merges X (|X| > 1, vol(X) <= k). Returns the node moves performed.
  std::vector<Move> merge(std::span<const ComponentId> set);

  /// Splits every component of Y into singletons, resets their edges and
  /// relocates singletons out of over-committed clusters.
  std::vector<Move> end_epoch(std::span<const ComponentId> set, std::int64_t t = 0);

  /// One iteration of the main loop: weight update, one merge attempt, one
  /// epoch check, then remote-serve bookkeeping.
  StepOutcome handle_request(const Request &request);

  /// Canonical text: components, positive weights, per-cluster (o, r, f).
  [[nodiscard]] std::string dump() const;

  // Test hooks for building corrupted or hand-made states.
  void set_weight(ComponentId a, ComponentId b, Cost w);
  void set_paid(ComponentId a, ComponentId b, Cost p);
  Component &mutable_component(ComponentId id);

private:
  using Key = std::pair<ComponentId, ComponentId>;
  static Key key(ComponentId a, ComponentId b) { return a < b ? Key{a, b} : Key{b, a}; }

  void relocate(NodeId node, ClusterId target, std::vector<Move> &moves);
  void drop_edges_touching(const std::vector<ComponentId> &ids);

  Params _params;
  std::vector<ClusterId> _assignment;
  std::vector<ComponentId> _component_of;
  std::map<ComponentId, Component> _components;
  std::map<Key, Cost> _weight;
  std::map<Key, Cost> _paid;
  std::vector<int> _merge_moves;
  std::vector<EpochRecord> _epochs;
};

/// CREP as an engine-pluggable algorithm.
class Crep final : public OnlineAlgorithm {
public:
  Crep(const Params &params, const Configuration &offline_initial)
      : _state(CrepState::init(params, offline_initial)) {}

  [[nodiscard]] std::string_view name() const override { return "crep"; }
  std::vector<Move> on_request(const Configuration &current, const Request &request) override;

  [[nodiscard]] const CrepState &state() const { return _state; }
  [[nodiscard]] const StepOutcome &last_step() const { return _last; }

  /// Online starting layout: the offline placement widened to 2l x 2k.
  static Configuration online_initial(const Params &params, const Configuration &offline_initial);

private:
  CrepState _state;
  StepOutcome _last;
};

struct Violation {
  std::string invariant;
  std::string detail;
};

struct InvariantOptions {
  bool merge_exhaustiveness = true;
  /// Only epoch records with index >= this are checked (per-epoch totals).
  std::size_t epochs_from = 0;
};

/// Checks the per-step CREP invariants: spare-space guarantee, ledger
/// conservation, component placement, paid-communication and migration
/// bounds, light/heavy edge bounds, per-epoch totals and (optionally) that no
/// merge-qualifying set remains.
std::vector<Violation> check_invariants(const CrepState &state, const InvariantOptions &options = {});

/// ceil(log2(x)) for x >= 1.
int ceil_log2(int x);

} // namespace brp::crep
