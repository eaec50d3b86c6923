#pragma once

#include <vector>

#include "brp/engine.h"

namespace brp {

/// Never migrates; every request is served where it lands.
class StaticAlgorithm final : public OnlineAlgorithm {
public:
  [[nodiscard]] std::string_view name() const override { return "static"; }
  std::vector<Move> on_request(const Configuration &, const Request &) override { return {}; }
};

/// Naive unaugmented rent-or-buy: once a node pair has been served remotely
/// tau*alpha times, v joins u's cluster, evicting the least-requested other
/// node of that cluster (lowest id on ties) into v's old slot.
class ThresholdAlgorithm final : public OnlineAlgorithm {
public:
  static constexpr int kDefaultTau = 2;

  explicit ThresholdAlgorithm(const Params &params, int tau = kDefaultTau);

  [[nodiscard]] std::string_view name() const override { return "threshold"; }
  std::vector<Move> on_request(const Configuration &current, const Request &request) override;

  [[nodiscard]] Cost pair_count(NodeId a, NodeId b) const;

private:
  int _n;
  Cost _trigger;
  std::vector<Cost> _pair;     // n x n, symmetric
  std::vector<Cost> _requests; // lifetime requests per node
};

} // namespace brp
