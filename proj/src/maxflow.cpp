#include "bisectlp/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "bisectlp/error.hpp"

namespace bisectlp {

MaxFlow::MaxFlow(int nodes) {
  if (nodes < 0) throw ConfigError("max-flow: negative node count");
  head_.assign(nodes, -1);
}

int MaxFlow::add_arc(int u, int v, std::int64_t capacity) {
  const int n = num_nodes();
  if (u < 0 || v < 0 || u >= n || v >= n) throw ConfigError("max-flow: arc endpoint out of range");
  if (capacity < 0) throw ConfigError("max-flow: negative capacity");
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({v, head_[u], capacity});
  head_[u] = id;
  arcs_.push_back({u, head_[v], 0});
  head_[v] = id + 1;
  initial_.push_back(capacity);
  initial_.push_back(0);
  return id;
}

bool MaxFlow::levels(int s, int t) {
  level_.assign(head_.size(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int a = head_[u]; a != -1; a = arcs_[a].next) {
      if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
        level_[arcs_[a].to] = level_[u] + 1;
        q.push(arcs_[a].to);
      }
    }
  }
  return level_[t] >= 0;
}

std::int64_t MaxFlow::push(int u, int t, std::int64_t limit) {
  if (u == t) return limit;
  for (int& a = cursor_[u]; a != -1; a = arcs_[a].next) {
    Arc& arc = arcs_[a];
    if (arc.cap <= 0 || level_[arc.to] != level_[u] + 1) continue;
    const auto got = push(arc.to, t, std::min(limit, arc.cap));
    if (got > 0) {
      arc.cap -= got;
      arcs_[a ^ 1].cap += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(int source, int sink) {
  if (source == sink) throw ConfigError("max-flow: source equals sink");
  std::int64_t total = 0;
  while (levels(source, sink)) {
    cursor_ = head_;
    while (auto f = push(source, sink, std::numeric_limits<std::int64_t>::max())) total += f;
  }
  return total;
}

std::int64_t MaxFlow::flow(int arc) const { return initial_[arc] - arcs_[arc].cap; }

}  // namespace bisectlp
