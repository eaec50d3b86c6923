#include "brp/adversaries.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <string>

namespace brp::adversary {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = next();
  while (x >= limit) {
    x = next();
  }
  return x % bound;
}

std::optional<Request> SequenceSource::next(const Configuration &) {
  if (_cursor == _requests.size()) {
    return std::nullopt;
  }
  return _requests[_cursor++];
}

// ---------------------------------------------------------------------------

RingAdversary::RingAdversary(int n) : _n(n) {
  if (n < 2) {
    throw Error(Errc::InvalidParams, "ring needs at least two nodes");
  }
}

std::optional<Request> RingAdversary::next(const Configuration &online) {
  for (NodeId i = 0; i < _n; ++i) {
    const NodeId j = (i + 1) % _n;
    if (!online.collocated(i, j)) {
      return Request{std::min(i, j), std::max(i, j)};
    }
  }
  throw Error(Errc::AdversaryStuck, "the whole ring is in one cluster");
}

// ---------------------------------------------------------------------------

ChaseAdversary::ChaseAdversary(const Params &params) : _k(params.k), _alpha(params.alpha) {
  params.validate();
  if (params.l != 2 || params.k < 2) {
    throw Error(Errc::GeometryError, "this adversary needs l = 2 and k >= 2");
  }
}

Configuration ChaseAdversary::initial(const Params &params) {
  const int k = params.k;
  if (params.l != 2 || k < 2) {
    throw Error(Errc::GeometryError, "this adversary needs l = 2 and k >= 2");
  }
  std::vector<std::vector<NodeId>> clusters(2);
  clusters[0].push_back(k); // v_1
  clusters[1].push_back(0); // u_1
  for (int i = 2; i <= k; ++i) {
    clusters[0].push_back(i - 1);
    clusters[1].push_back(k + i - 1);
  }
  return Configuration::from_clusters(clusters, k);
}

std::optional<Request> ChaseAdversary::next(const Configuration &online) {
  while (_phase <= _k - 1) {
    const NodeId head = u(_phase + 1);
    bool together = true;
    for (int j = lowest(); j <= _phase; ++j) {
      together = together && online.collocated(u(j), head);
    }
    if (!together) {
      // Round robin over j = phase, phase-1, ..., lowest().
      const int span = _phase - lowest() + 1;
      const int j = _phase - (_cursor % span);
      ++_cursor;
      ++_count;
      return Request{u(j), head};
    }
    _profile.push_back(_count);
    if (_phase == 1) {
      _skip_first = _count < 2 * _alpha;
    }
    ++_phase;
    _count = 0;
    _cursor = 0;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

K2PhaseAdversary::K2PhaseAdversary(const Params &params, int phases) : _phases(phases) {
  params.validate();
  if (params.k != 2) {
    throw Error(Errc::GeometryError, "the phase adversary needs k = 2");
  }
  if (phases < 1) {
    throw Error(Errc::InvalidParams, "need at least one phase");
  }
}

std::optional<Request> K2PhaseAdversary::next(const Configuration &online) {
  if (!_started) {
    const int n = online.node_count();
    for (NodeId a = 0; a < n && _a < 0; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (!online.collocated(a, b)) {
          _a = a;
          _b = b;
          break;
        }
      }
    }
    if (_a < 0) {
      throw Error(Errc::AdversaryStuck, "no split pair");
    }
    _started = true;
  }
  while (online.collocated(_a, _b)) {
    _profile.push_back(_count);
    _count = 0;
    if (static_cast<int>(_profile.size()) == _phases) {
      return std::nullopt;
    }
    if (_mate < 0) {
      throw Error(Errc::AdversaryStuck, "no former cluster-mate to pair with");
    }
    _a = _b;
    _b = _mate;
    _mate = -1;
  }
  for (const NodeId w : online.members(online.cluster_of(_b))) {
    if (w != _b) {
      _mate = w;
      break;
    }
  }
  ++_count;
  return Request{_a, _b};
}

// ---------------------------------------------------------------------------

PagingReduction::PagingReduction(const Params &params, std::vector<int> paging)
    : _k(params.k), _alpha(params.alpha), _paging(std::move(paging)) {
  if (params.k < 2 || params.l != 2) {
    throw Error(Errc::MalformedPagingSequence, "the reduction needs l = 2 and k >= 2");
  }
  for (const int item : _paging) {
    if (item < 0 || item >= _k) {
      throw Error(Errc::MalformedPagingSequence, "item " + std::to_string(item) + " out of range");
    }
  }
}

Configuration PagingReduction::initial(const Params &params) {
  const int k = params.k;
  if (k < 2 || params.l != 2) {
    throw Error(Errc::MalformedPagingSequence, "the reduction needs l = 2 and k >= 2");
  }
  std::vector<std::vector<NodeId>> clusters(2);
  for (NodeId i = 0; i < k - 1; ++i) {
    clusters[0].push_back(i);
  }
  clusters[0].push_back(k);
  clusters[1].push_back(k - 1);
  for (NodeId i = k + 1; i < 2 * k; ++i) {
    clusters[1].push_back(i);
  }
  return Configuration::from_clusters(clusters, k);
}

std::optional<Request> PagingReduction::next(const Configuration &online) {
  if (_index == _paging.size()) {
    return std::nullopt;
  }
  const NodeId d = dummy();
  // Block layout for paging request i > 0: alpha fillers, then 2*alpha+1 hits.
  const Cost fillers = _index == 0 ? 0 : _alpha;
  Request out;
  if (_sub < fillers) {
    NodeId partner = -1;
    for (const NodeId w : online.members(online.cluster_of(d))) {
      if (w == d) {
        continue;
      }
      if (partner < 0 || (w < _k && (partner >= _k || w < partner))) {
        partner = w;
      }
    }
    if (partner < 0) {
      throw Error(Errc::AdversaryStuck, "dummy node is alone in its cluster");
    }
    out = Request{std::min(partner, d), std::max(partner, d)};
  } else {
    out = Request{_paging[_index], d};
  }
  if (++_sub == fillers + 2 * _alpha + 1) {
    _sub = 0;
    ++_index;
  }
  ++_emitted;
  return out;
}

// ---------------------------------------------------------------------------

RandomPairs::RandomPairs(std::uint64_t seed, int n, std::size_t steps) : _rng(seed), _n(n), _left(steps) {
  if (n < 2) {
    throw Error(Errc::InvalidParams, "need at least two nodes");
  }
}

std::optional<Request> RandomPairs::next(const Configuration &) {
  if (_left == 0) {
    return std::nullopt;
  }
  --_left;
  const auto u = static_cast<NodeId>(_rng.below(_n));
  auto v = static_cast<NodeId>(_rng.below(_n - 1));
  if (v >= u) {
    ++v;
  }
  return Request{std::min(u, v), std::max(u, v)};
}

PlantedPartition::PlantedPartition(
    std::uint64_t seed, const Params &params, double p_in, double p_out, std::size_t steps
)
    : _rng(seed), _k(params.k), _l(params.l), _left(steps) {
  params.validate();
  if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0)) {
    throw Error(Errc::BadProbability, "probabilities must lie in [0, 1]");
  }
  const double n = params.n;
  const double intra = static_cast<double>(_l) * _k * (_k - 1) / 2.0;
  const double inter = n * (n - 1) / 2.0 - intra;
  const double w_in = p_in * intra;
  const double w_out = p_out * inter;
  if (w_in + w_out <= 0.0) {
    throw Error(Errc::BadProbability, "no pair has positive weight");
  }
  _intra_share = w_in / (w_in + w_out);

  std::vector<NodeId> order(params.n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[_rng.below(i)]);
  }
  _groups.assign(_l, {});
  _group.assign(params.n, 0);
  for (int g = 0; g < _l; ++g) {
    for (int i = 0; i < _k; ++i) {
      const NodeId v = order[g * _k + i];
      _groups[g].push_back(v);
      _group[v] = g;
    }
  }
}

std::optional<Request> PlantedPartition::next(const Configuration &) {
  if (_left == 0) {
    return std::nullopt;
  }
  --_left;
  const int n = _k * _l;
  NodeId u = 0;
  NodeId v = 0;
  if (_rng.unit() < _intra_share) {
    const auto &group = _groups[_rng.below(_l)];
    const auto i = _rng.below(_k);
    auto j = _rng.below(_k - 1);
    if (j >= i) {
      ++j;
    }
    u = group[i];
    v = group[j];
  } else {
    do {
      u = static_cast<NodeId>(_rng.below(n));
      v = static_cast<NodeId>(_rng.below(n));
    } while (_group[u] == _group[v]);
  }
  return Request{std::min(u, v), std::max(u, v)};
}

// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

std::vector<Request> parse_trace(std::istream &in, int n) {
  std::vector<Request> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty()) {
      continue;
    }
    auto fail = [&](const std::string &why) {
      throw Error(Errc::ParseError, "line " + std::to_string(number) + ": " + why);
    };
    std::vector<std::int64_t> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      const std::string_view field =
          trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      std::int64_t value = 0;
      const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
        fail("bad integer '" + std::string(field) + "'");
      }
      fields.push_back(value);
      if (comma == std::string_view::npos) {
        break;
      }
      start = comma + 1;
    }
    if (fields.size() != 2 && fields.size() != 3) {
      fail("expected 'u,v' or 't,u,v'");
    }
    const std::int64_t u = fields[fields.size() - 2];
    const std::int64_t v = fields[fields.size() - 1];
    if (u == v) {
      fail("self-pair " + std::to_string(u));
    }
    for (const std::int64_t id : {u, v}) {
      if (id < 0 || id >= n) {
        throw Error(
            Errc::NodeOutOfRange,
            "line " + std::to_string(number) + ": node " + std::to_string(id) + " outside [0, " +
                std::to_string(n) + ")"
        );
      }
    }
    out.push_back(Request{static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  return out;
}

std::vector<Request> parse_trace(const std::filesystem::path &path, int n) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::ParseError, "cannot open " + path.string());
  }
  return parse_trace(in, n);
}

} // namespace brp::adversary
