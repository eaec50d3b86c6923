#include "brp/baselines.h"

namespace brp {

ThresholdAlgorithm::ThresholdAlgorithm(const Params &params, const int tau)
    : _n(params.n), _trigger(tau * params.alpha) {
  params.validate();
  if (tau < 1) {
    throw Error(Errc::InvalidParams, "tau must be positive");
  }
  _pair.assign(static_cast<std::size_t>(_n) * _n, 0);
  _requests.assign(_n, 0);
}

Cost ThresholdAlgorithm::pair_count(NodeId a, NodeId b) const {
  return _pair.at(static_cast<std::size_t>(a) * _n + b);
}

std::vector<Move> ThresholdAlgorithm::on_request(const Configuration &current, const Request &request) {
  const NodeId u = request.u;
  const NodeId v = request.v;
  ++_requests[u];
  ++_requests[v];
  const ClusterId cu = current.cluster_of(u);
  const ClusterId cv = current.cluster_of(v);
  if (cu == cv || current.cluster_capacity() < 2) {
    return {};
  }
  auto at = [this](NodeId a, NodeId b) -> Cost & {
    return _pair[static_cast<std::size_t>(a) * _n + b];
  };
  ++at(u, v);
  ++at(v, u);
  if (at(u, v) < _trigger) {
    return {};
  }

  at(u, v) = 0;
  at(v, u) = 0;
  if (current.occupancy(cu) < current.cluster_capacity()) {
    return {{v, cu}};
  }
  NodeId victim = -1;
  for (const NodeId w : current.members(cu)) {
    if (w != u && (victim < 0 || _requests[w] < _requests[victim])) {
      victim = w;
    }
  }
  for (NodeId w = 0; w < _n; ++w) {
    at(victim, w) = 0;
    at(w, victim) = 0;
  }
  return {{v, cu}, {victim, cv}};
}

} // namespace brp
