#pragma once

#include <iosfwd>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "gsr/constructions.hpp"
#include "gsr/graph.hpp"
#include "gsr/plan.hpp"

namespace gsr {

/// For every synthetic edge of a reduced graph, the deleted original nodes
/// that bridge its endpoints. Original edges map to the empty set.
class HubMap {
 public:
  [[nodiscard]] const NodeSet& get(NodeId u, NodeId v) const;
  void set(NodeId u, NodeId v, NodeSet hub);
  void erase_incident(NodeId u, const std::set<NodeId>& neighbors);
  [[nodiscard]] std::size_t size() const { return hubs_.size(); }
  [[nodiscard]] const std::map<Edge, NodeSet>& entries() const { return hubs_; }

 private:
  static Edge key(NodeId u, NodeId v) { return u < v ? Edge{u, v} : Edge{v, u}; }
  std::map<Edge, NodeSet> hubs_;
};

/// Graph under node deletion, keeping the original node ids.
class ReducedGraph {
 public:
  explicit ReducedGraph(const Graph& g);

  [[nodiscard]] int original_n() const { return static_cast<int>(adj_.size()); }
  [[nodiscard]] int alive_count() const { return alive_count_; }
  [[nodiscard]] bool alive(NodeId v) const { return alive_[v] != 0; }
  [[nodiscard]] bool has_edge(NodeId u, NodeId v) const {
    return (bits_[std::size_t(u) * words_ + v / 64] >> (v % 64) & 1) != 0;
  }
  [[nodiscard]] const std::set<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
  [[nodiscard]] NodeSet nodes() const;
  [[nodiscard]] std::size_t edge_count() const;

  /// Alive part relabelled 0..alive_count-1 in ascending id order.
  struct Compact {
    Graph graph;
    std::vector<NodeId> ids;  // compact id -> original id
  };
  [[nodiscard]] Compact compact() const;

  void remove(NodeId u);
  void add_edge(NodeId u, NodeId v);

 private:
  void set_bit(NodeId u, NodeId v, bool on);

  std::vector<std::set<NodeId>> adj_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;  // adjacency bit matrix for O(1) has_edge
  std::vector<char> alive_;
  int alive_count_ = 0;
};

/// Leaves of the BFS tree rooted at `root` (neighbours visited in ascending id order).
NodeSet leaves(const ReducedGraph& g, NodeId root);
NodeSet leaves(const Graph& g, NodeId root);

/// Deletes `u` and joins every pair of its neighbours that is not already
/// adjacent, recording H(v,w) = H(v,u) + H(u,w) + {u} for each new edge.
void reduce(ReducedGraph& g, NodeId u, HubMap& hubs);

struct IterationRecord {
  int index = 0;
  NodeId root = 0;
  int radius = 0;
  int alive = 0;
  std::size_t edges = 0;
  NodeSet leaves;
  int hub_size = 0;
  int rows_emitted = 0;
};

struct ReductionTrace {
  int initial_radius = 0;
  std::vector<IterationRecord> iterations;

  /// Number of groups emitted, including the final single-node group.
  [[nodiscard]] int group_count() const { return static_cast<int>(iterations.size()) + 1; }
};

struct ReductionResult {
  MeasurementPlan plan;
  ReductionTrace trace;
};

/// Measurement design for a connected graph by repeated leaf stripping.
///
/// Each iteration takes the BFS tree from a centre of the current reduced
/// graph, measures its leaf set S through the hub formed by the other alive
/// nodes (expanded with the bridging sets needed to stay connected in the
/// original graph), then reduces S away. The last node is measured directly.
/// Each group carries its own hub-sum row, so groups decode independently.
/// Throws Infeasible on disconnected input.
ReductionResult algorithm1(const Graph& g, int k, const FParams& params = {});

/// algorithm1 on every connected component, merged into one plan.
MeasurementPlan algorithm1_by_component(const Graph& g, int k, const FParams& params = {});

/// BFS spanning tree from a centre, then the layered tree construction.
MeasurementPlan spanning_tree_baseline(const Graph& g, int k, const FParams& params = {});

/// One line per iteration: key=value fields.
void write_trace(std::ostream& out, const ReductionTrace& trace);

}  // namespace gsr
