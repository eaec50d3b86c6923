#include "brp/greedy.h"

#include <array>

namespace brp {

Greedy::Greedy(const Params &params, const int lambda)
    : _n(params.n), _alpha(params.alpha), _lambda(lambda) {
  params.validate();
  if (params.k != 2) {
    throw Error(Errc::GeometryError, "greedy needs clusters of size 2");
  }
  if (lambda < 1) {
    throw Error(Errc::InvalidParams, "lambda must be positive");
  }
  _out.assign(params.l, 0);
  _pair.assign(static_cast<std::size_t>(_n) * _n, 0);
}

void Greedy::bump(NodeId a, NodeId b) {
  ++_pair[index(a, b)];
  ++_pair[index(b, a)];
}

// Zeroes every counter of `a`. Counts towards clusters other than the two
// being reset are taken back out of those clusters' outgoing totals, which
// keeps out(C) equal to the sum of C's crossing pair counters.
void Greedy::reset_node(NodeId a, const Configuration &config, ClusterId c1, ClusterId c2) {
  for (NodeId b = 0; b < _n; ++b) {
    const Cost count = _pair[index(a, b)];
    if (count == 0) {
      continue;
    }
    const ClusterId cb = config.cluster_of(b);
    if (cb != c1 && cb != c2) {
      _out[cb] -= count;
    }
    _pair[index(a, b)] = 0;
    _pair[index(b, a)] = 0;
  }
}

std::vector<Move> Greedy::on_request(const Configuration &current, const Request &request) {
  if (current.cluster_capacity() != 2 || current.cluster_count() != static_cast<int>(_out.size())) {
    throw Error(Errc::GeometryError, "greedy runs on l clusters of capacity 2");
  }
  const ClusterId cu = current.cluster_of(request.u);
  const ClusterId cv = current.cluster_of(request.v);
  if (cu == cv) {
    return {};
  }
  ++_out[cu];
  ++_out[cv];
  bump(request.u, request.v);

  ClusterId c1 = -1;
  for (ClusterId c = 0; c < static_cast<ClusterId>(_out.size()); ++c) {
    if (_out[c] >= threshold()) {
      c1 = c;
      break;
    }
  }
  if (c1 < 0) {
    return {};
  }

  const std::vector<NodeId> first = current.members(c1);
  ClusterId c2 = -1;
  Cost best_sum = -1;
  for (ClusterId c = 0; c < static_cast<ClusterId>(_out.size()); ++c) {
    if (c == c1) {
      continue;
    }
    Cost sum = 0;
    for (const NodeId x : first) {
      for (const NodeId y : current.members(c)) {
        sum += _pair[index(x, y)];
      }
    }
    if (sum > best_sum) {
      best_sum = sum;
      c2 = c;
    }
  }
  const std::vector<NodeId> second = current.members(c2);

  NodeId x = first.front();
  NodeId y = second.front();
  for (const NodeId a : first) {
    for (const NodeId b : second) {
      if (_pair[index(a, b)] > _pair[index(x, y)]) {
        x = a;
        y = b;
      }
    }
  }
  const NodeId mate = first.front() == x ? first.back() : first.front();

  std::array<NodeId, 4> touched{};
  std::size_t count = 0;
  for (const NodeId a : first) {
    touched[count++] = a;
  }
  for (const NodeId b : second) {
    touched[count++] = b;
  }
  for (std::size_t i = 0; i < count; ++i) {
    reset_node(touched[i], current, c1, c2);
  }
  _out[c1] = 0;
  _out[c2] = 0;
  ++_swaps;
  return {{y, c1}, {mate, c2}};
}

} // namespace brp
