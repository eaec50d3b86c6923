#include "brp/engine.h"

#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace brp {

std::vector<Request> Transcript::requests() const {
  std::vector<Request> out;
  out.reserve(steps.size());
  for (const auto &step : steps) {
    out.push_back(step.request);
  }
  return out;
}

Transcript run(
    OnlineAlgorithm &algorithm,
    RequestSource &source,
    const Params &params,
    const Configuration &initial,
    const std::size_t max_steps,
    const StepObserver &observer
) {
  params.validate();
  if (initial.node_count() != params.n) {
    throw Error(Errc::ShapeMismatch, "initial configuration does not cover n nodes");
  }

  Transcript transcript;
  transcript.params = params;
  transcript.initial = initial;

  Configuration current = initial;
  for (std::size_t t = 1; t <= max_steps; ++t) {
    std::optional<Request> next = source.next(current);
    if (!next) {
      break;
    }
    Request request = *next;
    request.t = static_cast<std::int64_t>(t);
    if (request.u == request.v) {
      throw Error(Errc::InvalidRequest, "source emitted a self-pair at step " + std::to_string(t));
    }
    (void)current.cluster_of(request.u);
    (void)current.cluster_of(request.v);

    std::vector<Move> moves = algorithm.on_request(current, request);
    MoveResult moved = apply_moves(current, moves, params.alpha);
    current = std::move(moved.config);
    const int comm = serve_cost(current, request);

    transcript.ledger.record(comm, moved.cost);
    transcript.steps.push_back({request, std::move(moves), comm, moved.cost, current.digest()});
    if (t % Transcript::kSnapshotEvery == 0) {
      transcript.snapshots.emplace_back(t, current);
    }
    if (observer) {
      observer(t, current);
    }
  }
  transcript.final_config = std::move(current);
  return transcript;
}

ReplayCheck replay(const Transcript &transcript) {
  auto fail = [](std::size_t t, std::string reason) {
    return ReplayCheck{false, t, std::move(reason)};
  };

  Configuration current = transcript.initial;
  Cost comm = 0;
  Cost mig = 0;
  std::size_t snapshot = 0;
  for (std::size_t i = 0; i < transcript.steps.size(); ++i) {
    const std::size_t t = i + 1;
    const StepRecord &step = transcript.steps[i];
    MoveResult moved = apply_moves(current, step.moves, transcript.params.alpha);
    current = std::move(moved.config);
    const int served = serve_cost(current, step.request);
    if (moved.cost != step.mig) {
      return fail(t, "migration cost mismatch");
    }
    if (served != step.comm) {
      return fail(t, "communication cost mismatch");
    }
    if (i >= transcript.ledger.per_step.size() || transcript.ledger.per_step[i].comm != step.comm ||
        transcript.ledger.per_step[i].mig != step.mig) {
      return fail(t, "ledger entry mismatch");
    }
    if (current.digest() != step.digest) {
      return fail(t, "configuration digest mismatch");
    }
    if (snapshot < transcript.snapshots.size() && transcript.snapshots[snapshot].first == t) {
      if (!(transcript.snapshots[snapshot].second == current)) {
        return fail(t, "snapshot mismatch");
      }
      ++snapshot;
    }
    comm += served;
    mig += moved.cost;
  }
  if (comm != transcript.ledger.comm || mig != transcript.ledger.mig) {
    return fail(transcript.steps.size(), "ledger totals mismatch");
  }
  return {};
}

Ratio ratio(const Cost online_total, const Cost offline_total) {
  if (offline_total == 0) {
    return Ratio{online_total > 0 ? Ratio::Kind::Infinite : Ratio::Kind::Undefined, 0, 0};
  }
  const Cost g = std::gcd(online_total, offline_total);
  return Ratio{Ratio::Kind::Finite, online_total / g, offline_total / g};
}

std::string Ratio::str() const {
  switch (kind) {
  case Kind::Infinite: return "inf";
  case Kind::Undefined: return "undefined";
  case Kind::Finite: break;
  }
  return std::to_string(num) + "/" + std::to_string(den);
}

double Ratio::value() const {
  switch (kind) {
  case Kind::Infinite: return HUGE_VAL;
  case Kind::Undefined: return std::nan("");
  case Kind::Finite: break;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

bool Ratio::at_least(const Cost p, const Cost q) const {
  switch (kind) {
  case Kind::Infinite: return true;
  case Kind::Undefined: return false;
  case Kind::Finite: break;
  }
  return static_cast<__int128>(num) * q >= static_cast<__int128>(p) * den;
}

bool Ratio::at_most(const Cost p, const Cost q) const {
  switch (kind) {
  case Kind::Infinite: return false;
  case Kind::Undefined: return false;
  case Kind::Finite: break;
  }
  return static_cast<__int128>(num) * q <= static_cast<__int128>(p) * den;
}

std::string format_step(const StepRecord &step) {
  std::ostringstream line;
  line << step.request.t << ',' << step.request.u << ',' << step.request.v << ',';
  if (step.moves.empty()) {
    line << '-';
  }
  for (std::size_t i = 0; i < step.moves.size(); ++i) {
    line << (i ? ";" : "") << step.moves[i].node << ':' << step.moves[i].target;
  }
  line << ',' << step.comm << ',' << step.mig;
  return line.str();
}

void write_steps(std::ostream &out, const Transcript &transcript) {
  for (const auto &step : transcript.steps) {
    out << format_step(step) << '\n';
  }
}

namespace {

template <typename Int> Int parse_int(std::string_view text, std::string_view what) {
  Int value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(Errc::ParseError, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return parts;
}

} // namespace

StepRecord parse_step(std::string_view line) {
  const auto fields = split(line, ',');
  if (fields.size() != 6) {
    throw Error(Errc::ParseError, "step record needs 6 fields: '" + std::string(line) + "'");
  }
  StepRecord step;
  step.request.t = parse_int<std::int64_t>(fields[0], "t");
  step.request.u = parse_int<NodeId>(fields[1], "u");
  step.request.v = parse_int<NodeId>(fields[2], "v");
  if (fields[3] != "-") {
    for (const auto move : split(fields[3], ';')) {
      const auto parts = split(move, ':');
      if (parts.size() != 2) {
        throw Error(Errc::ParseError, "bad move '" + std::string(move) + "'");
      }
      step.moves.push_back(
          {parse_int<NodeId>(parts[0], "node"), parse_int<ClusterId>(parts[1], "cluster")}
      );
    }
  }
  step.comm = parse_int<Cost>(fields[4], "comm");
  step.mig = parse_int<Cost>(fields[5], "mig");
  return step;
}

} // namespace brp
