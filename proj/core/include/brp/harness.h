#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "brp/engine.h"
#include "brp/offline.h"

namespace brp::cli {

/// Everything needed to reproduce one run. Field names double as config-file
/// keys and (with a "--" prefix) command-line flags.
struct RunSpec {
  std::string alg = "crep";     // greedy | crep | threshold | static
  std::string source = "random"; // random | planted | ring | chase | k2phase | paging | trace
  int n = 0;                     // 0: derived as k * l
  int k = 2;
  int l = 2;
  Cost alpha = 1;
  int delta = 4; // only CREP is augmented
  int lambda = 3;
  int threshold = 2; // tau for the threshold baseline
  std::uint64_t seed = 1;
  std::size_t steps = 1000;
  std::string oracle = "none"; // dp | static | none
  std::string trace;
  std::string out;
  int phases = 10;               // k2phase
  double p_in = 0.9;             // planted
  double p_out = 0.1;            // planted
  std::size_t paging_length = 20; // paging

  [[nodiscard]] Params params() const;
  /// Throws Error(InvalidSpec) on unknown names or incompatible choices.
  void validate() const;
  /// Sets one field from its textual form; throws InvalidSpec on unknown keys
  /// or unparsable values.
  void set(const std::string &key, const std::string &value);
};

/// Flat "key = value" file; '#' starts a comment.
void load_config(RunSpec &spec, std::istream &in);
void load_config(RunSpec &spec, const std::filesystem::path &path);

struct InvariantSummary {
  bool checked = false;
  std::size_t violations = 0;
  std::size_t first_bad_step = 0;
  std::string first; // "<invariant>: <detail>"
  std::string dump;  // algorithm state at the first violation
};

struct RunResult {
  RunSpec spec;
  Transcript transcript;
  std::optional<Cost> off_cost;
  std::string oracle_error;
  std::optional<Ratio> ratio;
  std::vector<Cost> profile;
  std::optional<offline::ReferenceCosts> references;
  InvariantSummary invariants;
  std::string steps_path;

  [[nodiscard]] Cost on_cost() const { return transcript.ledger.total(); }
  /// Deterministic JSON report.
  [[nodiscard]] std::string to_json() const;
};

/// Executes the spec; writes the report (and a .steps file next to it) when
/// spec.out is set. `stop_at_violation` makes the run end at the first
/// failed invariant.
RunResult cmd_run(const RunSpec &spec, bool stop_at_violation = false);

/// cmd_run with per-step invariant assertions, stopping at the first failure.
/// Only greedy and crep have invariants to check.
RunResult cmd_verify(const RunSpec &spec);

struct SweepGrid {
  std::vector<Cost> alphas;
  std::vector<int> ks;
  std::vector<int> ls;
  std::vector<std::uint64_t> seeds;
};

/// One CSV row per grid cell (base spec with alpha/k/l/seed substituted),
/// sorted by cell key. Per-cell failures are written into the ratio column
/// as "error:<code>"; the sweep continues.
std::string cmd_sweep(const RunSpec &base, const SweepGrid &grid, unsigned threads = 0);

inline constexpr const char *kSweepHeader = "alg,source,n,k,l,alpha,seed,on_cost,off_cost,ratio";

/// Runs several algorithms against fresh copies of the same source.
std::string cmd_compare(const RunSpec &base, const std::vector<std::string> &algorithms);

} // namespace brp::cli
