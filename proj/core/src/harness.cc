#include "brp/harness.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "brp/adversaries.h"
#include "brp/baselines.h"
#include "brp/crep.h"
#include "brp/greedy.h"

namespace brp::cli {

namespace {

const std::vector<std::string> kAlgorithms = {"greedy", "crep", "threshold", "static"};
const std::vector<std::string> kSources = {"random", "planted", "ring", "chase", "k2phase", "paging", "trace"};

bool one_of(const std::string &value, const std::vector<std::string> &options) {
  return std::find(options.begin(), options.end(), value) != options.end();
}

[[noreturn]] void bad_spec(const std::string &what) { throw Error(Errc::InvalidSpec, what); }

template <typename T> T parse_number(const std::string &key, const std::string &text) {
  T value{};
  const char *end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  if (text.empty() || result.ec != std::errc{} || result.ptr != end) {
    bad_spec("bad value '" + text + "' for " + key);
  }
  return value;
}

double parse_double(const std::string &key, const std::string &text) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception &) {
    bad_spec("bad value '" + text + "' for " + key);
  }
  if (used != text.size()) {
    bad_spec("bad value '" + text + "' for " + key);
  }
  return value;
}

std::string trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

// Shortest round-trip decimal, locale independent.
std::string decimal(double x) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(6) << std::fixed << x;
  return out.str();
}

// Offline layout the run starts from; sources with a prescribed start
// override the contiguous one.
Configuration offline_initial(const RunSpec &spec) {
  const Params params = spec.params();
  if (spec.source == "chase") {
    return adversary::ChaseAdversary::initial(params);
  }
  if (spec.source == "paging") {
    return adversary::PagingReduction::initial(params);
  }
  return Configuration::contiguous(params);
}

std::vector<int> paging_sequence(const RunSpec &spec) {
  adversary::Rng rng(spec.seed);
  std::vector<int> items(spec.paging_length);
  for (int &item : items) {
    item = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.k)));
  }
  return items;
}

std::unique_ptr<RequestSource> make_source(const RunSpec &spec) {
  const Params params = spec.params();
  if (spec.source == "random") {
    return std::make_unique<adversary::RandomPairs>(spec.seed, params.n, spec.steps);
  }
  if (spec.source == "planted") {
    return std::make_unique<adversary::PlantedPartition>(spec.seed, params, spec.p_in, spec.p_out, spec.steps);
  }
  if (spec.source == "ring") {
    return std::make_unique<adversary::RingAdversary>(params.n);
  }
  if (spec.source == "chase") {
    return std::make_unique<adversary::ChaseAdversary>(params);
  }
  if (spec.source == "k2phase") {
    return std::make_unique<adversary::K2PhaseAdversary>(params, spec.phases);
  }
  if (spec.source == "paging") {
    return std::make_unique<adversary::PagingReduction>(params, paging_sequence(spec));
  }
  return std::make_unique<adversary::SequenceSource>(adversary::parse_trace(spec.trace, params.n));
}

std::unique_ptr<OnlineAlgorithm> make_algorithm(const RunSpec &spec, const Configuration &initial) {
  const Params params = spec.params();
  if (spec.alg == "greedy") {
    return std::make_unique<Greedy>(params, spec.lambda);
  }
  if (spec.alg == "crep") {
    return std::make_unique<crep::Crep>(params, initial);
  }
  if (spec.alg == "threshold") {
    return std::make_unique<ThresholdAlgorithm>(params, spec.threshold);
  }
  return std::make_unique<StaticAlgorithm>();
}

std::string greedy_dump(const Greedy &greedy, int clusters) {
  std::ostringstream out;
  out << "outgoing";
  for (ClusterId c = 0; c < clusters; ++c) {
    out << ' ' << greedy.outgoing(c);
  }
  out << " (threshold " << greedy.threshold() << ")\n";
  return out.str();
}

} // namespace

Params RunSpec::params() const {
  Params p{k * l, k, l, alpha, alg == "crep" ? delta : 1};
  p.validate();
  return p;
}

void RunSpec::validate() const {
  if (!one_of(alg, kAlgorithms)) {
    bad_spec("unknown algorithm '" + alg + "'");
  }
  if (!one_of(source, kSources)) {
    bad_spec("unknown source '" + source + "'");
  }
  if (oracle != "dp" && oracle != "static" && oracle != "none") {
    bad_spec("unknown oracle '" + oracle + "'");
  }
  if (k < 1 || l < 1 || alpha < 1) {
    bad_spec("k, l and alpha must be positive");
  }
  if (n != 0 && n != k * l) {
    bad_spec("n must equal k * l");
  }
  if (alg == "greedy" && k != 2) {
    bad_spec("greedy requires k = 2");
  }
  if (alg == "crep" && delta < 4) {
    bad_spec("crep requires delta >= 4");
  }
  if ((source == "chase" || source == "paging") && l != 2) {
    bad_spec(source + " requires l = 2");
  }
  if (source == "k2phase" && k != 2) {
    bad_spec("k2phase requires k = 2");
  }
  if (source == "trace" && trace.empty()) {
    bad_spec("trace source needs --trace");
  }
  if (lambda < 1 || threshold < 1 || phases < 1) {
    bad_spec("lambda, threshold and phases must be positive");
  }
}

void RunSpec::set(const std::string &key, const std::string &value) {
  if (key == "alg") {
    alg = value;
  } else if (key == "source") {
    source = value;
  } else if (key == "n") {
    n = parse_number<int>(key, value);
  } else if (key == "k") {
    k = parse_number<int>(key, value);
  } else if (key == "l") {
    l = parse_number<int>(key, value);
  } else if (key == "alpha") {
    alpha = parse_number<Cost>(key, value);
  } else if (key == "delta") {
    delta = parse_number<int>(key, value);
  } else if (key == "lambda") {
    lambda = parse_number<int>(key, value);
  } else if (key == "threshold") {
    threshold = parse_number<int>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "steps") {
    steps = parse_number<std::size_t>(key, value);
  } else if (key == "oracle") {
    oracle = value;
  } else if (key == "trace") {
    trace = value;
  } else if (key == "out") {
    out = value;
  } else if (key == "phases") {
    phases = parse_number<int>(key, value);
  } else if (key == "p_in") {
    p_in = parse_double(key, value);
  } else if (key == "p_out") {
    p_out = parse_double(key, value);
  } else if (key == "paging_length") {
    paging_length = parse_number<std::size_t>(key, value);
  } else {
    bad_spec("unknown key '" + key + "'");
  }
}

void load_config(RunSpec &spec, std::istream &in) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string text = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty()) {
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      bad_spec("config line " + std::to_string(number) + ": expected key = value");
    }
    spec.set(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }
}

void load_config(RunSpec &spec, const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    bad_spec("cannot open config " + path.string());
  }
  load_config(spec, in);
}

RunResult cmd_run(const RunSpec &spec, const bool stop_at_violation) {
  spec.validate();
  const Params params = spec.params();
  const Configuration initial = offline_initial(spec);
  const Configuration online_start =
      spec.alg == "crep" ? crep::Crep::online_initial(params, initial) : initial;

  std::unique_ptr<RequestSource> source = make_source(spec);
  std::unique_ptr<OnlineAlgorithm> algorithm = make_algorithm(spec, initial);
  auto *crep_alg = dynamic_cast<crep::Crep *>(algorithm.get());
  auto *greedy = dynamic_cast<Greedy *>(algorithm.get());

  RunResult result;
  result.spec = spec;
  result.spec.n = params.n;
  InvariantSummary &inv = result.invariants;
  inv.checked = crep_alg != nullptr || greedy != nullptr;

  // Stops the engine by ending the stream once a violation is seen.
  struct Gate final : RequestSource {
    RequestSource *inner;
    bool *halt;
    std::optional<Request> next(const Configuration &online) override {
      return *halt ? std::nullopt : inner->next(online);
    }
  };
  bool halt = false;
  Gate gate;
  gate.inner = source.get();
  gate.halt = &halt;

  auto record = [&](std::size_t t, const std::string &first, const std::string &dump, std::size_t count) {
    if (count == 0) {
      return;
    }
    if (inv.violations == 0) {
      inv.first_bad_step = t;
      inv.first = first;
      inv.dump = dump;
    }
    inv.violations += count;
    halt = halt || stop_at_violation;
  };
  const StepObserver observer = [&](std::size_t t, const Configuration &) {
    if (crep_alg != nullptr) {
      const auto violations = crep::check_invariants(crep_alg->state());
      if (!violations.empty()) {
        record(
            t, violations.front().invariant + ": " + violations.front().detail, crep_alg->state().dump(),
            violations.size()
        );
      }
    } else if (greedy != nullptr) {
      std::size_t over = 0;
      for (ClusterId c = 0; c < params.l; ++c) {
        over += greedy->outgoing(c) > greedy->threshold() ? 1 : 0;
      }
      record(t, "counter: outgoing count above lambda*alpha", greedy_dump(*greedy, params.l), over);
    }
  };

  result.transcript = run(*algorithm, gate, params, online_start, spec.steps, observer);

  if (const auto *k2 = dynamic_cast<const adversary::K2PhaseAdversary *>(source.get())) {
    result.profile = k2->profile();
    if (!result.profile.empty() && std::all_of(result.profile.begin(), result.profile.end(), [](Cost w) {
          return w > 0;
        })) {
      result.references = offline::reference_strategies_k2(result.profile, params.alpha);
    }
  } else if (const auto *t2 = dynamic_cast<const adversary::ChaseAdversary *>(source.get())) {
    result.profile = t2->profile();
  }

  const std::vector<Request> sigma = result.transcript.requests();
  const Params offline_params{params.n, params.k, params.l, params.alpha, 1};
  try {
    if (spec.oracle == "dp") {
      result.off_cost = offline::optimal_cost(sigma, offline_params, initial).cost;
    } else if (spec.oracle == "static") {
      result.off_cost = offline::static_optimal(sigma, offline_params, initial).cost;
    }
  } catch (const Error &e) {
    result.oracle_error = std::string(to_string(e.code())) + ": " + e.what();
  }
  if (result.off_cost) {
    result.ratio = ratio(result.on_cost(), *result.off_cost);
  }

  if (!spec.out.empty()) {
    result.steps_path = spec.out + ".steps";
    std::ofstream steps(result.steps_path);
    write_steps(steps, result.transcript);
    std::ofstream report(spec.out);
    report << result.to_json() << '\n';
    if (!steps || !report) {
      throw Error(Errc::InvalidSpec, "cannot write " + spec.out);
    }
  }
  return result;
}

RunResult cmd_verify(const RunSpec &spec) {
  if (spec.alg != "crep" && spec.alg != "greedy") {
    bad_spec("verify supports crep and greedy");
  }
  return cmd_run(spec, true);
}

std::string RunResult::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["spec"] = {
      {"alg", spec.alg},       {"source", spec.source}, {"n", spec.n},
      {"k", spec.k},           {"l", spec.l},           {"alpha", spec.alpha},
      {"delta", spec.alg == "crep" ? spec.delta : 1},   {"lambda", spec.lambda},
      {"threshold", spec.threshold},                    {"seed", spec.seed},
      {"steps", spec.steps},   {"oracle", spec.oracle}, {"phases", spec.phases},
      {"p_in", spec.p_in},     {"p_out", spec.p_out},   {"paging_length", spec.paging_length},
  };
  if (!spec.trace.empty()) {
    j["spec"]["trace"] = spec.trace;
  }
  j["requests"] = transcript.steps.size();
  j["online"] = {
      {"comm", transcript.ledger.comm},
      {"mig", transcript.ledger.mig},
      {"total", transcript.ledger.total()},
  };
  j["offline"] = {{"oracle", spec.oracle}, {"cost", nullptr}};
  if (off_cost) {
    j["offline"]["cost"] = *off_cost;
  }
  if (!oracle_error.empty()) {
    j["offline"]["error"] = oracle_error;
  }
  if (ratio) {
    j["ratio"] = {{"exact", ratio->str()}, {"decimal", nullptr}};
    if (ratio->kind == Ratio::Kind::Finite) {
      j["ratio"]["decimal"] = decimal(ratio->value());
    }
  }
  if (!profile.empty()) {
    j["profile"] = profile;
  }
  if (references) {
    j["references"] = {
        {"never", references->never},
        {"first", references->first},
        {"each", references->each},
        {"min", references->min()},
    };
  }
  if (invariants.checked) {
    j["invariants"] = {{"ok", invariants.violations == 0}, {"violations", invariants.violations}};
    if (invariants.violations != 0) {
      j["invariants"]["first_bad_step"] = invariants.first_bad_step;
      j["invariants"]["first"] = invariants.first;
    }
  }
  if (!steps_path.empty()) {
    j["steps_path"] = steps_path;
  }
  return j.dump(2);
}

namespace {

std::string csv_cell(const std::optional<Cost> &value) { return value ? std::to_string(*value) : ""; }

} // namespace

std::string cmd_sweep(const RunSpec &base, const SweepGrid &grid, unsigned threads) {
  struct Cell {
    Cost alpha;
    int k;
    int l;
    std::uint64_t seed;
    std::string row;
  };
  auto or_base = [](auto values, auto fallback) {
    if (values.empty()) {
      values.push_back(fallback);
    }
    return values;
  };
  std::vector<Cell> cells;
  for (const int k : or_base(grid.ks, base.k)) {
    for (const int l : or_base(grid.ls, base.l)) {
      for (const Cost alpha : or_base(grid.alphas, base.alpha)) {
        for (const std::uint64_t seed : or_base(grid.seeds, base.seed)) {
          cells.push_back({alpha, k, l, seed, {}});
        }
      }
    }
  }

  auto run_cell = [&base](Cell &cell) {
    RunSpec spec = base;
    spec.alpha = cell.alpha;
    spec.k = cell.k;
    spec.l = cell.l;
    spec.seed = cell.seed;
    spec.n = 0;
    spec.out.clear();
    std::ostringstream row;
    row << spec.alg << ',' << spec.source << ',' << spec.k * spec.l << ',' << spec.k << ',' << spec.l << ','
        << spec.alpha << ',' << spec.seed << ',';
    try {
      const RunResult r = cmd_run(spec);
      row << r.on_cost() << ',' << csv_cell(r.off_cost) << ',' << (r.ratio ? r.ratio->str() : "");
    } catch (const Error &e) {
      row << ",,error:" << to_string(e.code());
    }
    cell.row = row.str();
  };

  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cells.size())));
  std::size_t next = 0;
  std::mutex lock;
  auto worker = [&] {
    while (true) {
      std::size_t mine = 0;
      {
        const std::lock_guard guard(lock);
        if (next == cells.size()) {
          return;
        }
        mine = next++;
      }
      run_cell(cells[mine]);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &t : pool) {
    t.join();
  }

  std::sort(cells.begin(), cells.end(), [](const Cell &a, const Cell &b) {
    return std::tie(a.k, a.l, a.alpha, a.seed) < std::tie(b.k, b.l, b.alpha, b.seed);
  });
  std::string csv = std::string(kSweepHeader) + "\n";
  for (const Cell &cell : cells) {
    csv += cell.row + "\n";
  }
  return csv;
}

std::string cmd_compare(const RunSpec &base, const std::vector<std::string> &algorithms) {
  std::string csv = "alg,on_cost,off_cost,ratio\n";
  for (const std::string &alg : algorithms) {
    RunSpec spec = base;
    spec.alg = alg;
    spec.out.clear();
    std::ostringstream row;
    row << alg << ',';
    try {
      const RunResult r = cmd_run(spec);
      row << r.on_cost() << ',' << csv_cell(r.off_cost) << ',' << (r.ratio ? r.ratio->str() : "");
    } catch (const Error &e) {
      row << ",,error:" << to_string(e.code());
    }
    csv += row.str() + "\n";
  }
  return csv;
}

} // namespace brp::cli
