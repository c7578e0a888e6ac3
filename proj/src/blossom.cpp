#include <cstdint>
#include <queue>
#include <string>
#include <utility>

#include "bisectlp/error.hpp"
#include "bisectlp/regularity.hpp"

namespace bisectlp {

namespace {

class Edmonds {
 public:
  Edmonds(const std::vector<std::vector<int>>& adj, std::vector<int>& mate)
      : adj_(adj), mate_(mate), n_(static_cast<int>(adj.size())),
        label_(n_, -1), parent_(n_, -1), base_(n_), mark_(n_, 0), seen_(n_, 0) {
    for (int v = 0; v < n_; ++v) base_[v] = v;
  }

  // BFS over alternating trees rooted at `root`; flips the first augmenting
  // path found.
  bool augment(int root) {
    for (int v : touched_) {
      label_[v] = -1;
      parent_[v] = -1;
      base_[v] = v;
      seen_[v] = 0;
    }
    touched_.clear();
    std::queue<int>().swap(queue_);
    set_even(root);
    while (!queue_.empty()) {
      const int v = queue_.front();
      queue_.pop();
      for (int u : adj_[v]) {
        if (label_[u] == 1 || find(u) == find(v)) continue;
        if (label_[u] == -1) {
          touch(u);
          parent_[u] = v;
          if (mate_[u] == -1) {
            flip(u);
            return true;
          }
          label_[u] = 1;
          set_even(mate_[u]);
        } else {
          const int a = lca(v, u);
          shrink(v, u, a);
          shrink(u, v, a);
        }
      }
    }
    return false;
  }

 private:
  void touch(int v) {
    if (!seen_[v]) {
      seen_[v] = 1;
      touched_.push_back(v);
    }
  }
  void set_even(int v) {
    touch(v);
    label_[v] = 0;
    queue_.push(v);
  }
  int find(int v) {
    while (base_[v] != v) {
      base_[v] = base_[base_[v]];
      v = base_[v];
    }
    return v;
  }
  int lca(int a, int b) {
    ++stamp_;
    while (true) {
      if (a != -1) {
        a = find(a);
        if (mark_[a] == stamp_) return a;
        mark_[a] = stamp_;
        a = mate_[a] == -1 ? -1 : parent_[mate_[a]];
      }
      std::swap(a, b);
    }
  }
  void shrink(int v, int u, int a) {
    while (find(v) != a) {
      parent_[v] = u;
      const int w = mate_[v];
      if (label_[w] == 1) set_even(w);
      base_[find(v)] = a;
      base_[find(w)] = a;
      u = w;
      v = parent_[w];
    }
  }
  void flip(int u) {
    while (u != -1) {
      const int pv = parent_[u];
      const int next = mate_[pv];
      mate_[u] = pv;
      mate_[pv] = u;
      u = next;
    }
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int>& mate_;
  int n_;
  std::vector<int> label_, parent_, base_, mark_;
  std::vector<std::uint8_t> seen_;
  std::vector<int> touched_;
  std::queue<int> queue_;
  int stamp_ = 0;
};

}  // namespace

MatchingRun max_matching(const std::vector<std::vector<int>>& adj, std::vector<int> mate,
                         bool stop_at_first_failure) {
  const int n = static_cast<int>(adj.size());
  if (mate.empty()) mate.assign(n, -1);
  if (static_cast<int>(mate.size()) != n) throw ConfigError("matching: warm start has wrong size");
  for (int v = 0; v < n; ++v) {
    const int w = mate[v];
    if (w == -1) continue;
    if (w < 0 || w >= n || mate[w] != v)
      throw ConfigError("matching: warm start is not a matching (node " + std::to_string(v) + ")");
  }
  MatchingRun run;
  run.perfect = true;
  Edmonds ed(adj, mate);
  for (int root = 0; root < n; ++root) {
    if (mate[root] != -1) continue;
    if (!ed.augment(root) && stop_at_first_failure) {
      run.perfect = false;
      break;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (mate[v] > v) ++run.size;
    if (mate[v] == -1) run.perfect = false;
  }
  run.mate = std::move(mate);
  return run;
}

std::vector<int> blossom_max_matching(const Graph& g) {
  std::vector<std::vector<int>> adj(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v) adj[v] = g.neighbors(v);
  return max_matching(adj).mate;
}

}  // namespace bisectlp
