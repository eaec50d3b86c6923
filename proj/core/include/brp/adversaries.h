#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "brp/engine.h"

namespace brp::adversary {

/// mt19937_64 with a bounded draw of our own, so streams are identical across
/// standard libraries (std distributions are implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : _engine(seed) {}

  std::uint64_t next() { return _engine(); }
  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 _engine;
};

/// Replays a fixed request list.
class SequenceSource final : public RequestSource {
public:
  explicit SequenceSource(std::vector<Request> requests) : _requests(std::move(requests)) {}

  std::optional<Request> next(const Configuration &) override;
  [[nodiscard]] const std::vector<Request> &requests() const { return _requests; }

private:
  std::vector<Request> _requests;
  std::size_t _cursor = 0;
};

/// Ring u_1..u_n (u_i is node i-1) with edges e_i = {u_i, u_{i+1 mod n}}.
/// Always requests the lowest-index edge cut by the online placement.
class RingAdversary final : public RequestSource {
public:
  explicit RingAdversary(int n);

  /// Throws AdversaryStuck if the whole ring sits in one cluster.
  std::optional<Request> next(const Configuration &online) override;

private:
  int _n;
};

/// Two-cluster construction with nodes u_i = i-1 and v_i = k+i-1. Phase p
/// round-robins requests {u_j, u_{p+1}} for j = p..1 until the online side
/// collocates u_1..u_{p+1}; if phase 1 took fewer than 2*alpha requests,
/// u_1 is left out from then on. Ends after phase k-1.
class ChaseAdversary final : public RequestSource {
public:
  /// Needs l = 2 and k >= 2.
  explicit ChaseAdversary(const Params &params);

  /// Offline/online start: cluster 0 = {v_1, u_2..u_k}, cluster 1 = {u_1, v_2..v_k}.
  static Configuration initial(const Params &params);

  std::optional<Request> next(const Configuration &online) override;

  [[nodiscard]] const std::vector<Cost> &profile() const { return _profile; }
  [[nodiscard]] bool skips_first() const { return _skip_first; }
  [[nodiscard]] int phase() const { return _phase; }

private:
  [[nodiscard]] NodeId u(int i) const { return i - 1; }
  [[nodiscard]] int lowest() const { return _skip_first ? 2 : 1; }

  int _k;
  Cost _alpha;
  int _phase = 1;
  int _cursor = 0; // offset into the phase's round robin
  Cost _count = 0; // requests emitted in the current phase
  bool _skip_first = false;
  std::vector<Cost> _profile;
};

/// k = 2 phase adversary. Phase 1 requests the lexicographically least split
/// pair (a, b); once the online side collocates it, the next phase requests b
/// with its former cluster-mate. Stops after `phases` phases.
class K2PhaseAdversary final : public RequestSource {
public:
  K2PhaseAdversary(const Params &params, int phases);

  /// Throws AdversaryStuck when phase 1 finds no split pair.
  std::optional<Request> next(const Configuration &online) override;

  /// Requests per completed phase, w_1..w_p.
  [[nodiscard]] const std::vector<Cost> &profile() const { return _profile; }

private:
  int _phases;
  bool _started = false;
  NodeId _a = -1;
  NodeId _b = -1;
  NodeId _mate = -1; // b's cluster-mate as of the latest emission
  Cost _count = 0;
  std::vector<Cost> _profile;
};

/// Paging-to-repartitioning reduction on two clusters. Items are nodes
/// 0..k-1, the dummy is node k and nodes k+1..2k-1 are padding. Each paging
/// request i becomes 2*alpha+1 requests {i, d}; between consecutive paging
/// requests, alpha fillers pair d with the lowest item sharing its cluster.
class PagingReduction final : public RequestSource {
public:
  /// Throws MalformedPagingSequence for k < 2, l != 2 or items outside [0, k).
  PagingReduction(const Params &params, std::vector<int> paging);

  /// Cluster 0 = {0..k-2, d}, cluster 1 = {k-1, k+1..2k-1}.
  static Configuration initial(const Params &params);

  std::optional<Request> next(const Configuration &online) override;

  [[nodiscard]] NodeId dummy() const { return _k; }
  [[nodiscard]] std::size_t emitted() const { return _emitted; }

private:
  int _k;
  Cost _alpha;
  std::vector<int> _paging;
  std::size_t _index = 0;
  Cost _sub = 0; // position within the current paging request's block
  std::size_t _emitted = 0;
};

/// Uniform unordered pairs over n nodes.
class RandomPairs final : public RequestSource {
public:
  RandomPairs(std::uint64_t seed, int n, std::size_t steps);

  std::optional<Request> next(const Configuration &) override;

private:
  Rng _rng;
  int _n;
  std::size_t _left;
};

/// Hidden partition into l groups of k (a seeded shuffle). Each request is an
/// intra-group pair with probability proportional to p_in * #intra pairs,
/// otherwise an inter-group pair, uniform within its class.
class PlantedPartition final : public RequestSource {
public:
  /// Throws BadProbability unless p_in, p_out are in [0, 1] and the class
  /// weights are not both zero.
  PlantedPartition(std::uint64_t seed, const Params &params, double p_in, double p_out, std::size_t steps);

  std::optional<Request> next(const Configuration &) override;

  /// group_of()[v] is v's hidden group.
  [[nodiscard]] const std::vector<int> &group_of() const { return _group; }

private:
  Rng _rng;
  int _k;
  int _l;
  std::vector<std::vector<NodeId>> _groups;
  std::vector<int> _group;
  double _intra_share;
  std::size_t _left;
};

/// Trace lines "u,v" or "t,u,v"; blank lines are skipped. Throws ParseError
/// (with the 1-based line number) and NodeOutOfRange for ids outside [0, n).
std::vector<Request> parse_trace(std::istream &in, int n);
std::vector<Request> parse_trace(const std::filesystem::path &path, int n);

} // namespace brp::adversary
