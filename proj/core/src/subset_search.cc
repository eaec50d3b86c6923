// Branch-and-bound searches over component subsets for the merge set and the
// epoch-ending set. Both visit subsets in lexicographic order of their sorted
// index tuples, so "first found among equals" is the lexicographic tie-break.

#include <algorithm>
#include <functional>
#include <numeric>

#include "brp/crep.h"

namespace brp::crep {

namespace {

// suffix[i][s] = sum of weight[i][j] for j >= s.
std::vector<std::vector<Cost>> suffix_sums(const SubsetGraph &graph) {
  const std::size_t n = graph.size();
  std::vector<std::vector<Cost>> suffix(n, std::vector<Cost>(n + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = n; j-- > 0;) {
      suffix[i][j] = suffix[i][j + 1] + graph.weight[i][j];
    }
  }
  return suffix;
}

Cost total_weight(const SubsetGraph &graph) {
  Cost total = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.size(); ++j) {
      total += graph.weight[i][j];
    }
  }
  return total;
}

class SearchBase {
protected:
  explicit SearchBase(const SubsetGraph &graph)
      : _g(graph),
        _n(graph.size()),
        _suffix(suffix_sums(graph)),
        _to_chosen(graph.size(), 0) {}

  void push(std::size_t x) {
    _chosen.push_back(x);
    for (std::size_t i = 0; i < _n; ++i) {
      _to_chosen[i] += _g.weight[i][x];
    }
  }

  void pop() {
    const std::size_t x = _chosen.back();
    _chosen.pop_back();
    for (std::size_t i = 0; i < _n; ++i) {
      _to_chosen[i] -= _g.weight[i][x];
    }
  }

  // Over-estimate of what adding i can contribute when the rest of the set is
  // drawn from indices >= start.
  [[nodiscard]] Cost reach(std::size_t i, std::size_t start) const {
    return _to_chosen[i] + _suffix[i][start] - _g.weight[i][i];
  }

  [[nodiscard]] std::vector<ComponentId> ids_of(const std::vector<std::size_t> &indices) const {
    std::vector<ComponentId> out;
    out.reserve(indices.size());
    for (const std::size_t i : indices) {
      out.push_back(_g.ids[i]);
    }
    return out;
  }

  const SubsetGraph &_g;
  std::size_t _n;
  std::vector<std::vector<Cost>> _suffix;
  std::vector<Cost> _to_chosen; // weight from i to the chosen set
  std::vector<std::size_t> _chosen;
};

class MergeSearch : SearchBase {
public:
  MergeSearch(const SubsetGraph &graph, int k, Cost alpha)
      : SearchBase(graph), _k(k), _alpha(alpha) {}

  std::vector<ComponentId> run() {
    if (_k < 2 || total_weight(_g) < _alpha) {
      return {};
    }
    dfs(0, 0, 0);
    return ids_of(_best);
  }

private:
  void dfs(std::size_t start, int vol, Cost com) {
    const auto count = static_cast<Cost>(_chosen.size());
    if (count >= 2 && com >= (count - 1) * _alpha) {
      const auto best_count = static_cast<Cost>(_best.size());
      if (count > best_count || (count == best_count && com > _best_com)) {
        _best = _chosen;
        _best_com = com;
      }
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = start; i < _n; ++i) {
      if (vol + _g.volume[i] <= _k) {
        candidates.push_back(i);
      }
    }
    if (candidates.empty()) {
      return;
    }

    // Cardinality bound: the most candidates that can still fit.
    std::vector<int> vols;
    vols.reserve(candidates.size());
    for (const std::size_t i : candidates) {
      vols.push_back(_g.volume[i]);
    }
    std::sort(vols.begin(), vols.end());
    Cost fit = 0;
    for (int room = _k - vol; fit < static_cast<Cost>(vols.size()) && vols[fit] <= room; ++fit) {
      room -= vols[fit];
    }
    if (count + fit < std::max<Cost>(2, static_cast<Cost>(_best.size()))) {
      return;
    }

    // Slack bound: no superset in this branch can reach the threshold.
    if (count >= 1) {
      Cost slack = com - (count - 1) * _alpha;
      for (const std::size_t i : candidates) {
        slack += std::max<Cost>(0, reach(i, start) - _alpha);
      }
      if (slack < 0) {
        return;
      }
    }

    for (const std::size_t i : candidates) {
      const Cost added = _to_chosen[i];
      push(i);
      dfs(i + 1, vol + _g.volume[i], com + added);
      pop();
    }
  }

  int _k;
  Cost _alpha;
  std::vector<std::size_t> _best;
  Cost _best_com = -1;
};

class EpochSearch : SearchBase {
public:
  EpochSearch(const SubsetGraph &graph, int k, Cost alpha)
      : SearchBase(graph), _k(k), _alpha(alpha) {}

  std::vector<ComponentId> run() {
    // Any qualifying Y has com(Y) >= (k+1)*alpha.
    if (total_weight(_g) < static_cast<Cost>(_k + 1) * _alpha) {
      return {};
    }
    // The smallest qualifying cardinality yields inclusion-minimal sets only.
    for (std::size_t target = 2; target <= _n; ++target) {
      _target = target;
      _best.clear();
      _best_vol = -1;
      dfs(0, 0, 0);
      if (!_best.empty()) {
        return ids_of(_best);
      }
    }
    return {};
  }

private:
  void dfs(std::size_t start, int vol, Cost com) {
    const std::size_t count = _chosen.size();
    if (count == _target) {
      if (vol > _k && com >= vol * _alpha && (_best_vol < 0 || vol < _best_vol)) {
        _best = _chosen;
        _best_vol = vol;
      }
      return;
    }
    const std::size_t need = _target - count;
    if (_n - start < need) {
      return;
    }

    std::vector<int> vols(_g.volume.begin() + static_cast<std::ptrdiff_t>(start), _g.volume.end());
    std::sort(vols.begin(), vols.end());
    const int smallest = std::accumulate(vols.begin(), vols.begin() + need, 0);
    const int largest = std::accumulate(vols.end() - need, vols.end(), 0);
    if (vol + largest <= _k) {
      return;
    }
    if (_best_vol >= 0 && vol + smallest >= _best_vol) {
      return;
    }

    std::vector<Cost> gains;
    gains.reserve(_n - start);
    for (std::size_t i = start; i < _n; ++i) {
      gains.push_back(reach(i, start) - _g.volume[i] * _alpha);
    }
    std::partial_sort(gains.begin(), gains.begin() + need, gains.end(), std::greater<>());
    Cost slack = com - vol * _alpha;
    for (std::size_t i = 0; i < need; ++i) {
      slack += gains[i];
    }
    if (slack < 0) {
      return;
    }

    for (std::size_t i = start; i + need <= _n; ++i) {
      const Cost added = _to_chosen[i];
      push(i);
      dfs(i + 1, vol + _g.volume[i], com + added);
      pop();
    }
  }

  int _k;
  Cost _alpha;
  std::size_t _target = 0;
  std::vector<std::size_t> _best;
  int _best_vol = -1;
};

} // namespace

std::vector<ComponentId> find_merge_set(const SubsetGraph &graph, const int k, const Cost alpha) {
  return MergeSearch(graph, k, alpha).run();
}

std::vector<ComponentId> find_epoch_set(const SubsetGraph &graph, const int k, const Cost alpha) {
  return EpochSearch(graph, k, alpha).run();
}

} // namespace brp::crep
