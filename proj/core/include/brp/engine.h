#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brp/core.h"

namespace brp {

/// An online repartitioning strategy. The engine hands it the current
/// configuration and the next request; the returned moves are applied (and
/// charged) before the request is served.
class OnlineAlgorithm {
public:
  virtual ~OnlineAlgorithm() = default;

  [[nodiscard]] virtual std::string_view name() const = 0;
  virtual std::vector<Move> on_request(const Configuration &current, const Request &request) = 0;
};

/// A request stream. Adaptive sources look at the online configuration;
/// oblivious ones ignore it. std::nullopt ends the stream.
class RequestSource {
public:
  virtual ~RequestSource() = default;

  virtual std::optional<Request> next(const Configuration &online) = 0;
};

struct StepRecord {
  Request request;
  std::vector<Move> moves;
  Cost comm = 0;
  Cost mig = 0;
  std::uint64_t digest = 0;
};

struct Transcript {
  static constexpr std::size_t kSnapshotEvery = 64;

  Params params;
  Configuration initial;
  Configuration final_config;
  std::vector<StepRecord> steps;
  CostLedger ledger;
  /// Full configuration after step t for every t divisible by kSnapshotEvery.
  std::vector<std::pair<std::size_t, Configuration>> snapshots;

  [[nodiscard]] std::vector<Request> requests() const;
};

/// Called after every step with the 1-based step index and the configuration
/// the request was served in.
using StepObserver = std::function<void(std::size_t t, const Configuration &after)>;

Transcript run(
    OnlineAlgorithm &algorithm,
    RequestSource &source,
    const Params &params,
    const Configuration &initial,
    std::size_t max_steps,
    const StepObserver &observer = {}
);

struct ReplayCheck {
  bool ok = true;
  std::size_t first_bad_step = 0; // 1-based; 0 when ok
  std::string reason;
};

/// Re-applies the recorded moves through apply_moves and compares ledger
/// entries, digests and snapshots.
ReplayCheck replay(const Transcript &transcript);

/// Exact online/offline ratio.
struct Ratio {
  enum class Kind { Finite, Infinite, Undefined };

  Kind kind = Kind::Undefined;
  Cost num = 0;
  Cost den = 1;

  [[nodiscard]] std::string str() const;
  [[nodiscard]] double value() const;
  /// ratio >= p/q, exact. Infinite is >= everything; Undefined is >= nothing.
  [[nodiscard]] bool at_least(Cost p, Cost q) const;
  /// ratio <= p/q, exact.
  [[nodiscard]] bool at_most(Cost p, Cost q) const;
};

Ratio ratio(Cost online_total, Cost offline_total);

// Line-delimited step records: "t,u,v,moves,comm,mig" where moves is
// "node:cluster" joined by ';' or '-' when empty.
void write_steps(std::ostream &out, const Transcript &transcript);
std::string format_step(const StepRecord &step);
StepRecord parse_step(std::string_view line);

} // namespace brp
