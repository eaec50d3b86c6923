#pragma once

#include <vector>

#include "brp/engine.h"

namespace brp {

/// Rematching algorithm for clusters of two. Counts inter-cluster requests
/// per cluster and per node pair; when a cluster's count reaches lambda*alpha
/// it is paired with the cluster it talked to most and one swap (two node
/// moves) collocates the hottest pair between them.
class Greedy final : public OnlineAlgorithm {
public:
  static constexpr int kDefaultLambda = 3;

  /// Throws GeometryError unless params.k == 2.
  explicit Greedy(const Params &params, int lambda = kDefaultLambda);

  [[nodiscard]] std::string_view name() const override { return "greedy"; }
  std::vector<Move> on_request(const Configuration &current, const Request &request) override;

  [[nodiscard]] int lambda() const { return _lambda; }
  [[nodiscard]] Cost threshold() const { return _lambda * _alpha; }
  [[nodiscard]] Cost outgoing(ClusterId cluster) const { return _out.at(cluster); }
  [[nodiscard]] Cost pair_count(NodeId a, NodeId b) const { return _pair.at(index(a, b)); }
  [[nodiscard]] std::size_t swaps() const { return _swaps; }

private:
  [[nodiscard]] std::size_t index(NodeId a, NodeId b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(_n) + static_cast<std::size_t>(b);
  }
  void bump(NodeId a, NodeId b);
  void reset_node(NodeId a, const Configuration &config, ClusterId c1, ClusterId c2);

  int _n;
  Cost _alpha;
  int _lambda;
  std::vector<Cost> _out;
  std::vector<Cost> _pair; // n x n, symmetric
  std::size_t _swaps = 0;
};

} // namespace brp
