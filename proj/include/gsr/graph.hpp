#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsr/error.hpp"

namespace gsr {

using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;

/// Sorted, duplicate-free set of node ids.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<NodeId> ids);
  /// Sorts `ids`; throws InvalidArgument on duplicates or negative ids.
  explicit NodeSet(std::vector<NodeId> ids);

  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] bool contains(NodeId v) const;
  [[nodiscard]] std::span<const NodeId> ids() const { return members_; }
  [[nodiscard]] const std::vector<NodeId>& vec() const { return members_; }
  [[nodiscard]] NodeId operator[](std::size_t i) const { return members_[i]; }
  [[nodiscard]] auto begin() const { return members_.begin(); }
  [[nodiscard]] auto end() const { return members_.end(); }

  [[nodiscard]] NodeSet unite(const NodeSet& other) const;
  [[nodiscard]] NodeSet minus(const NodeSet& other) const;
  [[nodiscard]] NodeSet intersect(const NodeSet& other) const;
  [[nodiscard]] bool disjoint(const NodeSet& other) const;

  /// Throws unless every id lies in [0, n).
  void check_range(int n) const;

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::vector<NodeId> members_;
};

/// Undirected simple graph on nodes 0..n-1. Immutable after construction.
class Graph {
 public:
  Graph() = default;
  /// Throws InvalidArgument on self-loops, out-of-range ids or duplicate edges.
  Graph(int n, std::span<const Edge> edges);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  /// Edges with u < v, sorted lexicographically.
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] std::span<const NodeId> neighbors(NodeId v) const { return adj_[v]; }
  [[nodiscard]] int degree(NodeId v) const { return static_cast<int>(adj_[v].size()); }
  [[nodiscard]] bool has_edge(NodeId u, NodeId v) const;
  [[nodiscard]] NodeSet all_nodes() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adj_;  // each list sorted ascending
};

// Generators. Node ids are 0-based: paper node p is id p-1.

Graph gen_line(int n);
Graph gen_ring(int n);
/// Ring plus chords (i, i+2 mod n).
Graph gen_g4(int n);
/// gen_g4 without chord (i-1, i+1) for every i in `deleted_chords`.
Graph gen_g4_minus(int n, std::span<const NodeId> deleted_chords);
/// side x side grid; node (r, c) has id r * side + c.
Graph gen_grid(int side);
Graph gen_star(int leaves);
Graph gen_complete(int n);
/// Uniform random labelled tree from a random Pruefer sequence.
Graph gen_tree_random(int n, std::uint64_t seed);
/// Random recursive tree: node v attaches to a uniform node among 0..v-1.
Graph gen_tree_recursive(int n, std::uint64_t seed);
Graph gen_er(int n, double p, std::uint64_t seed);
/// Barabasi-Albert: random tree on m0 nodes, then each new node attaches to
/// min(m, current size) distinct nodes chosen with probability proportional
/// to degree.
Graph gen_ba(int n, int m0, int m, std::uint64_t seed);
/// Adds `count` uniformly random node pairs that are not yet edges.
Graph add_random_edges(const Graph& g, int count, std::uint64_t seed);

// Structural queries.

/// True iff the subgraph induced by `s` is connected. Throws on empty `s`.
bool is_connected(const Graph& g, const NodeSet& s);
bool is_connected(const Graph& g);
/// Hop distances from `source`; -1 for unreachable nodes.
std::vector<int> bfs_distances(const Graph& g, NodeId source);

struct SpanningTree {
  NodeId root = 0;
  std::vector<NodeId> parent;  // parent[root] == -1
  std::vector<int> depth;
};

/// BFS tree visiting neighbours in ascending id order. Throws on disconnected input.
SpanningTree bfs_spanning_tree(const Graph& g, NodeId root);

struct RadiusCenter {
  int radius = 0;
  NodeId center = 0;
};

/// Minimum eccentricity and the smallest id attaining it. Throws on disconnected input.
RadiusCenter radius_and_center(const Graph& g);

/// Connected components, each sorted, ordered by smallest member.
std::vector<NodeSet> components(const Graph& g);

/// Subgraph induced by `s` with nodes relabelled 0..|s|-1 in the order of `s`.
Graph induced_subgraph(const Graph& g, const NodeSet& s);

/// S is a hub for U: G_S connected and every u in U has a neighbour in S.
bool is_hub(const Graph& g, const NodeSet& hub, const NodeSet& target);

// Text format: "n <count>" line, then one "u v" per line; '#' starts a comment line.
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);
void save_graph(const std::string& path, const Graph& g);
Graph load_graph(const std::string& path);

}  // namespace gsr
