#pragma once

#include <cstdint>
#include <vector>

namespace bisectlp {

/// Dinic's blocking-flow max-flow on integer capacities. Deterministic: arcs
/// are scanned in insertion order.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  /// Adds arc u -> v and returns its id; flow on it is available after run().
  int add_arc(int u, int v, std::int64_t capacity);
  std::int64_t run(int source, int sink);
  std::int64_t flow(int arc) const;
  int num_nodes() const { return static_cast<int>(head_.size()); }

 private:
  struct Arc {
    int to;
    int next;
    std::int64_t cap;
  };
  bool levels(int s, int t);
  std::int64_t push(int u, int t, std::int64_t limit);

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<std::int64_t> initial_;
  std::vector<int> level_, cursor_;
};

}  // namespace bisectlp
