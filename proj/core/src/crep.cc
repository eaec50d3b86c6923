#include "brp/crep.h"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace brp::crep {

namespace {

int singleton_reserve(int k) { return std::min(1, k - 1); }

} // namespace

int ceil_log2(int x) {
  int bits = 0;
  while ((1 << bits) < x) {
    ++bits;
  }
  return bits;
}

CrepState CrepState::init(const Params &params, const Configuration &initial) {
  params.validate();
  if (params.delta < 4) {
    throw Error(
        Errc::InsufficientAugmentation,
        "CREP needs augmentation >= 4, got " + std::to_string(params.delta)
    );
  }
  if (initial.node_count() != params.n || initial.cluster_count() != params.l ||
      initial.cluster_capacity() != params.k) {
    throw Error(Errc::ShapeMismatch, "initial placement must be the offline l x k layout");
  }

  CrepState state;
  state._params = params;
  state._assignment.assign(initial.assignment().begin(), initial.assignment().end());
  state._component_of.resize(params.n);
  state._merge_moves.assign(params.n, 0);
  for (NodeId v = 0; v < params.n; ++v) {
    state._component_of[v] = v;
    state._components.emplace(
        v, Component{v, {v}, state._assignment[v], singleton_reserve(params.k), 0}
    );
  }
  return state;
}

CrepState CrepState::from_parts(
    const Params &params,
    std::vector<Component> components,
    const std::vector<std::pair<std::pair<ComponentId, ComponentId>, Cost>> &weights
) {
  params.validate();
  CrepState state;
  state._params = params;
  state._assignment.assign(params.n, -1);
  state._component_of.assign(params.n, -1);
  state._merge_moves.assign(params.n, 0);
  for (auto &component : components) {
    std::sort(component.nodes.begin(), component.nodes.end());
    if (component.nodes.empty()) {
      throw Error(Errc::InvalidParams, "empty component");
    }
    component.id = component.nodes.front();
    if (component.cluster < 0 || component.cluster >= state.cluster_count()) {
      throw Error(Errc::UnknownCluster, "component cluster " + std::to_string(component.cluster));
    }
    for (const NodeId v : component.nodes) {
      if (v < 0 || v >= params.n) {
        throw Error(Errc::UnknownNode, "node " + std::to_string(v));
      }
      if (state._component_of[v] != -1) {
        throw Error(Errc::DuplicateNode, "node " + std::to_string(v));
      }
      state._component_of[v] = component.id;
      state._assignment[v] = component.cluster;
    }
    state._components.emplace(component.id, std::move(component));
  }
  if (std::find(state._component_of.begin(), state._component_of.end(), -1) !=
      state._component_of.end()) {
    throw Error(Errc::UnknownNode, "components do not cover every node");
  }
  for (const auto &[pair, w] : weights) {
    state.set_weight(pair.first, pair.second, w);
  }
  return state;
}

Configuration CrepState::configuration() const {
  return Configuration::from_assignment(_assignment, cluster_count(), cluster_capacity());
}

const Component &CrepState::component(ComponentId id) const {
  const auto it = _components.find(id);
  if (it == _components.end()) {
    throw Error(Errc::UnknownNode, "no component " + std::to_string(id));
  }
  return it->second;
}

Component &CrepState::mutable_component(ComponentId id) {
  const auto it = _components.find(id);
  if (it == _components.end()) {
    throw Error(Errc::UnknownNode, "no component " + std::to_string(id));
  }
  return it->second;
}

Cost CrepState::weight(ComponentId a, ComponentId b) const {
  const auto it = _weight.find(key(a, b));
  return it == _weight.end() ? 0 : it->second;
}

Cost CrepState::paid(ComponentId a, ComponentId b) const {
  const auto it = _paid.find(key(a, b));
  return it == _paid.end() ? 0 : it->second;
}

void CrepState::set_weight(ComponentId a, ComponentId b, Cost w) {
  if (a == b) {
    throw Error(Errc::InvalidParams, "self edge");
  }
  if (w == 0) {
    _weight.erase(key(a, b));
  } else {
    _weight[key(a, b)] = w;
  }
}

void CrepState::set_paid(ComponentId a, ComponentId b, Cost p) {
  if (p == 0) {
    _paid.erase(key(a, b));
  } else {
    _paid[key(a, b)] = p;
  }
}

SubsetGraph CrepState::subset_graph() const {
  SubsetGraph graph;
  std::map<ComponentId, std::size_t> index;
  for (const auto &[id, component] : _components) {
    index[id] = graph.ids.size();
    graph.ids.push_back(id);
    graph.volume.push_back(component.size());
  }
  graph.weight.assign(graph.ids.size(), std::vector<Cost>(graph.ids.size(), 0));
  for (const auto &[pair, w] : _weight) {
    const std::size_t i = index.at(pair.first);
    const std::size_t j = index.at(pair.second);
    graph.weight[i][j] = w;
    graph.weight[j][i] = w;
  }
  return graph;
}

std::vector<ClusterSpace> CrepState::cluster_ledger() const {
  std::vector<ClusterSpace> ledger(cluster_count());
  for (const auto &[id, component] : _components) {
    ledger[component.cluster].occupied += component.size();
    ledger[component.cluster].reserved += component.reserved;
  }
  for (auto &space : ledger) {
    space.spare = cluster_capacity() - space.occupied - space.reserved;
  }
  return ledger;
}

void CrepState::relocate(NodeId node, ClusterId target, std::vector<Move> &moves) {
  if (_assignment[node] != target) {
    _assignment[node] = target;
    moves.push_back({node, target});
  }
}

void CrepState::drop_edges_touching(const std::vector<ComponentId> &ids) {
  auto touches = [&](const Key &pair) {
    return std::binary_search(ids.begin(), ids.end(), pair.first) ||
           std::binary_search(ids.begin(), ids.end(), pair.second);
  };
  std::erase_if(_weight, [&](const auto &entry) { return touches(entry.first); });
  std::erase_if(_paid, [&](const auto &entry) { return touches(entry.first); });
}

std::vector<Move> CrepState::merge(std::span<const ComponentId> set) {
  std::vector<ComponentId> members(set.begin(), set.end());
  std::sort(members.begin(), members.end());
  if (members.size() < 2 || std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw Error(Errc::InvalidParams, "merge needs at least two distinct components");
  }
  int volume = 0;
  for (const ComponentId id : members) {
    volume += component(id).size();
  }
  if (volume > k()) {
    throw Error(Errc::InvalidParams, "merge set volume exceeds k");
  }

  // Host: largest reservation, then larger size, then lower id.
  const Component *host = &component(members.front());
  for (const ComponentId id : members) {
    const Component &c = component(id);
    if (c.reserved > host->reserved ||
        (c.reserved == host->reserved && c.size() > host->size())) {
      host = &c;
    }
  }

  ClusterId target = host->cluster;
  int reserved = 0;
  if (host->reserved >= volume - host->size()) {
    reserved = host->reserved - (volume - host->size());
  } else {
    std::vector<ClusterSpace> ledger = cluster_ledger();
    std::vector<int> resident(cluster_count(), 0);
    for (const ComponentId id : members) {
      const Component &c = component(id);
      ledger[c.cluster].spare += c.size() + c.reserved;
      resident[c.cluster] += c.size();
    }
    const int need = std::min(k(), 2 * volume);
    target = -1;
    for (ClusterId s = 0; s < cluster_count(); ++s) {
      if (ledger[s].spare >= need && (target < 0 || resident[s] > resident[target])) {
        target = s;
      }
    }
    if (target < 0) {
      throw Error(
          Errc::NoEligibleCluster,
          "no cluster with spare >= " + std::to_string(need) + "\n" + dump()
      );
    }
    reserved = std::min(k() - volume, volume);
  }

  std::vector<Move> moves;
  Component merged;
  merged.cluster = target;
  merged.reserved = reserved;
  for (const ComponentId id : members) {
    const Component &c = component(id);
    merged.comm_paid += c.comm_paid;
    for (const NodeId v : c.nodes) {
      if (_assignment[v] != target) {
        ++_merge_moves[v];
      }
      relocate(v, target, moves);
      merged.nodes.push_back(v);
    }
  }
  std::sort(merged.nodes.begin(), merged.nodes.end());
  merged.id = merged.nodes.front();

  // Outside edges are summed onto the new component; inner edges vanish and
  // their paid remote serves become the merged component's own.
  auto fold = [&](std::map<Key, Cost> &edges, bool paid_edges) {
    std::map<ComponentId, Cost> outside;
    for (auto it = edges.begin(); it != edges.end();) {
      const bool first_in = std::binary_search(members.begin(), members.end(), it->first.first);
      const bool second_in = std::binary_search(members.begin(), members.end(), it->first.second);
      if (!first_in && !second_in) {
        ++it;
        continue;
      }
      if (first_in && second_in) {
        if (paid_edges) {
          merged.comm_paid += it->second;
        }
      } else {
        outside[first_in ? it->first.second : it->first.first] += it->second;
      }
      it = edges.erase(it);
    }
    for (const auto &[other, w] : outside) {
      if (w != 0) {
        edges[key(merged.id, other)] = w;
      }
    }
  };
  fold(_weight, false);
  fold(_paid, true);

  for (const ComponentId id : members) {
    _components.erase(id);
  }
  for (const NodeId v : merged.nodes) {
    _component_of[v] = merged.id;
  }
  const ComponentId merged_id = merged.id;
  _components.emplace(merged_id, std::move(merged));
  return moves;
}

std::vector<Move> CrepState::end_epoch(std::span<const ComponentId> set, std::int64_t t) {
  std::vector<ComponentId> members(set.begin(), set.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) {
    return {};
  }

  EpochRecord record;
  record.t = t;
  record.components = members;
  std::vector<NodeId> nodes;
  for (const ComponentId id : members) {
    const Component &c = component(id);
    record.volume += c.size();
    record.remote_serves += c.comm_paid;
    for (const NodeId v : c.nodes) {
      record.merge_migrations += _merge_moves[v];
      nodes.push_back(v);
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      record.remote_serves += paid(members[i], members[j]);
    }
  }
  std::sort(nodes.begin(), nodes.end());

  // Split in place.
  for (const ComponentId id : members) {
    const Component old = component(id);
    _components.erase(id);
    for (const NodeId v : old.nodes) {
      _components.emplace(v, Component{v, {v}, old.cluster, singleton_reserve(k()), 0});
      _component_of[v] = v;
      _merge_moves[v] = 0;
    }
  }
  std::vector<ComponentId> fresh = members;
  fresh.insert(fresh.end(), nodes.begin(), nodes.end());
  std::sort(fresh.begin(), fresh.end());
  fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
  drop_edges_touching(fresh);

  // Relocate singletons until every cluster fits r + o <= 2k.
  std::vector<Move> moves;
  while (true) {
    const std::vector<ClusterSpace> ledger = cluster_ledger();
    ClusterId worst = -1;
    for (ClusterId s = 0; s < cluster_count(); ++s) {
      if (ledger[s].spare < 0 && (worst < 0 || ledger[s].spare < ledger[worst].spare)) {
        worst = s;
      }
    }
    if (worst < 0) {
      break;
    }
    const Component *evictee = nullptr;
    for (const auto &[id, c] : _components) {
      if (c.cluster == worst && c.size() == 1) {
        evictee = &c;
        break;
      }
    }
    ClusterId target = -1;
    for (ClusterId s = 0; s < cluster_count(); ++s) {
      if (s != worst && (target < 0 || ledger[s].spare > ledger[target].spare)) {
        target = s;
      }
    }
    if (evictee == nullptr || target < 0 ||
        ledger[target].spare < evictee->size() + evictee->reserved) {
      throw Error(Errc::NoEligibleCluster, "cannot relieve cluster " + std::to_string(worst));
    }
    Component &moving = mutable_component(evictee->id);
    moving.cluster = target;
    relocate(moving.nodes.front(), target, moves);
    ++record.evicted;
  }

  _epochs.push_back(std::move(record));
  return moves;
}

StepOutcome CrepState::handle_request(const Request &request) {
  if (request.u == request.v) {
    throw Error(Errc::InvalidRequest, "self-pair");
  }
  const std::vector<ClusterId> before = _assignment;

  const ComponentId a = component_of(request.u);
  const ComponentId b = component_of(request.v);
  if (a != b) {
    _weight[key(a, b)] += 1;
  }

  StepOutcome outcome;
  const std::vector<ComponentId> merge_set = find_merge_set(subset_graph(), k(), alpha());
  if (merge_set.size() > 1) {
    merge(merge_set);
    outcome.merged = merge_set;
  }

  const ComponentId cu = component_of(request.u);
  const ComponentId cv = component_of(request.v);
  const std::vector<ComponentId> epoch_set = find_epoch_set(subset_graph(), k(), alpha());
  if (!epoch_set.empty()) {
    end_epoch(epoch_set, request.t);
    outcome.epoch = epoch_set;
  }

  outcome.remote = _assignment[request.u] != _assignment[request.v];
  if (outcome.remote) {
    const bool u_closed = std::binary_search(epoch_set.begin(), epoch_set.end(), cu);
    const bool v_closed = std::binary_search(epoch_set.begin(), epoch_set.end(), cv);
    if (u_closed && v_closed) {
      ++_epochs.back().remote_serves;
    } else if (!u_closed && !v_closed && cu != cv) {
      _paid[key(cu, cv)] += 1;
    }
    // One endpoint closed: its edges were reset with the epoch.
  }

  for (NodeId v = 0; v < static_cast<NodeId>(_assignment.size()); ++v) {
    if (_assignment[v] != before[v]) {
      outcome.moves.push_back({v, _assignment[v]});
    }
  }
  return outcome;
}

std::string CrepState::dump() const {
  std::ostringstream out;
  out << "components\n";
  for (const auto &[id, c] : _components) {
    out << "  [";
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      out << (i ? "," : "") << c.nodes[i];
    }
    out << "] cluster=" << c.cluster << " reserved=" << c.reserved << " paid=" << c.comm_paid
        << '\n';
  }
  out << "weights\n";
  for (const auto &[pair, w] : _weight) {
    out << "  " << pair.first << '-' << pair.second << ' ' << w << " paid=" << paid(pair.first, pair.second)
        << '\n';
  }
  out << "clusters\n";
  const auto ledger = cluster_ledger();
  for (std::size_t s = 0; s < ledger.size(); ++s) {
    out << "  " << s << " o=" << ledger[s].occupied << " r=" << ledger[s].reserved
        << " f=" << ledger[s].spare << '\n';
  }
  return out.str();
}

Configuration Crep::online_initial(const Params &params, const Configuration &offline_initial) {
  return offline_initial.widened(2 * params.l, 2 * params.k);
}

std::vector<Move> Crep::on_request(const Configuration &current, const Request &request) {
  const auto expected = _state.assignment();
  if (!std::equal(
          expected.begin(), expected.end(), current.assignment().begin(), current.assignment().end()
      )) {
    throw Error(Errc::StateDiverged, "engine configuration differs from CREP's placement");
  }
  _last = _state.handle_request(request);
  return _last.moves;
}

std::vector<Violation> check_invariants(const CrepState &state, const InvariantOptions &options) {
  std::vector<Violation> out;
  auto fail = [&out](std::string invariant, std::string detail) {
    out.push_back({std::move(invariant), std::move(detail)});
  };
  const int k = state.k();
  const Cost alpha = state.alpha();

  // Placement and component bookkeeping.
  std::vector<int> occupancy(state.cluster_count(), 0);
  for (const ClusterId c : state.assignment()) {
    ++occupancy.at(c);
  }
  for (const auto &[id, c] : state.components()) {
    if (c.size() > k) {
      fail("component", "component " + std::to_string(id) + " larger than k");
    }
    if (c.reserved < 0 || c.reserved > std::max(0, k - 1)) {
      fail("component", "component " + std::to_string(id) + " reserved " + std::to_string(c.reserved));
    }
    for (const NodeId v : c.nodes) {
      if (state.assignment()[v] != c.cluster) {
        fail("component", "node " + std::to_string(v) + " not in its component's cluster");
      }
      if (state.component_of(v) != id) {
        fail("component", "node " + std::to_string(v) + " has a stale component id");
      }
    }
  }

  // Ledger: r + o + f = 2k with nothing negative; occupancy matches placement.
  const auto ledger = state.cluster_ledger();
  int total = 0;
  bool spare_ok = false;
  for (std::size_t s = 0; s < ledger.size(); ++s) {
    total += ledger[s].occupied;
    if (ledger[s].occupied != occupancy[s]) {
      fail("ledger", "cluster " + std::to_string(s) + " occupancy mismatch");
    }
    if (ledger[s].spare < 0) {
      fail("ledger", "cluster " + std::to_string(s) + " over-committed (f=" +
                         std::to_string(ledger[s].spare) + ")");
    }
    spare_ok = spare_ok || ledger[s].spare >= k;
  }
  if (total != state.params().n) {
    fail("ledger", "occupancy does not sum to n");
  }
  if (!spare_ok) {
    fail("spare-cluster", "no cluster with spare >= k");
  }

  // Paid communication and merge migrations per component.
  for (const auto &[id, c] : state.components()) {
    if (c.comm_paid > (c.size() - 1) * alpha) {
      fail("paid-comm", "component " + std::to_string(id) + " paid " + std::to_string(c.comm_paid));
    }
    int sum = 0;
    const int per_node = ceil_log2(std::max(2, c.size()));
    for (const NodeId v : c.nodes) {
      sum += state.merge_migrations(v);
      if (state.merge_migrations(v) > per_node) {
        fail("merge-migrations", "node " + std::to_string(v) + " migrated " +
                         std::to_string(state.merge_migrations(v)) + " times");
      }
    }
    if (sum > c.size() * ceil_log2(c.size())) {
      fail("merge-migrations", "component " + std::to_string(id) + " migrations " + std::to_string(sum));
    }
  }

  // Light and heavy edge bounds.
  for (const auto &[pair, w] : state.weights()) {
    const int vol = state.component(pair.first).size() + state.component(pair.second).size();
    const Cost cap = vol <= k ? alpha : vol * alpha;
    if (w >= cap) {
      fail("edge-weight", "edge " + std::to_string(pair.first) + "-" + std::to_string(pair.second) +
                     " weight " + std::to_string(w));
    }
  }

  // Per-epoch totals.
  const auto &epochs = state.epochs();
  for (std::size_t e = options.epochs_from; e < epochs.size(); ++e) {
    const EpochRecord &r = epochs[e];
    if (r.merge_migrations > static_cast<Cost>(r.volume) * ceil_log2(k)) {
      fail("epoch-totals", "epoch at t=" + std::to_string(r.t) + " migrations " +
                         std::to_string(r.merge_migrations));
    }
    if (r.remote_serves > 2 * r.volume * alpha) {
      fail("epoch-totals", "epoch at t=" + std::to_string(r.t) + " remote serves " +
                         std::to_string(r.remote_serves));
    }
    if (2 * r.evicted > r.volume + 2) {
      fail("epoch-totals", "epoch at t=" + std::to_string(r.t) + " evicted " + std::to_string(r.evicted));
    }
  }

  if (options.merge_exhaustiveness) {
    const auto leftover = find_merge_set(state.subset_graph(), k, alpha);
    if (leftover.size() > 1) {
      fail("merge-exhaustive", "a merge-qualifying set remains");
    }
  }
  return out;
}

} // namespace brp::crep
