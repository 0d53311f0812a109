#include "gsr/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "gsr/random.hpp"

namespace gsr {

// ---------------------------------------------------------------------------
// NodeSet

NodeSet::NodeSet(std::initializer_list<NodeId> ids) : NodeSet(std::vector<NodeId>(ids)) {}

NodeSet::NodeSet(std::vector<NodeId> ids) : members_(std::move(ids)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw InvalidArgument("node set contains duplicate ids");
  }
  if (!members_.empty() && members_.front() < 0) {
    throw InvalidArgument("node set contains a negative id");
  }
}

bool NodeSet::contains(NodeId v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

NodeSet NodeSet::unite(const NodeSet& other) const {
  NodeSet out;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(out.members_));
  return out;
}

NodeSet NodeSet::minus(const NodeSet& other) const {
  NodeSet out;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(out.members_));
  return out;
}

NodeSet NodeSet::intersect(const NodeSet& other) const {
  NodeSet out;
  std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out.members_));
  return out;
}

bool NodeSet::disjoint(const NodeSet& other) const {
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a == *b) return false;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return true;
}

void NodeSet::check_range(int n) const {
  if (!members_.empty() && members_.back() >= n) {
    throw InvalidArgument("node id " + std::to_string(members_.back()) + " out of range for n=" +
                          std::to_string(n));
  }
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(int n, std::span<const Edge> edges) : n_(n), adj_(n < 0 ? 0 : n) {
  if (n < 0) throw InvalidArgument("negative node count");
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") out of range");
    }
    if (u == v) throw InvalidArgument("self-loop at node " + std::to_string(u));
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw InvalidArgument("duplicate edge (" + std::to_string(dup->first) + "," +
                          std::to_string(dup->second) + ")");
  }
  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& list : adj_) std::sort(list.begin(), list.end());
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
  const auto& list = adj_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

NodeSet Graph::all_nodes() const {
  std::vector<NodeId> ids(n_);
  for (int i = 0; i < n_; ++i) ids[i] = i;
  return NodeSet(std::move(ids));
}

// ---------------------------------------------------------------------------
// Generators

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

std::vector<Edge> ring_edges(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  if (n > 2) e.emplace_back(n - 1, 0);
  return e;
}

std::vector<Edge> pruefer_tree_edges(int n, Rng& rng) {
  std::vector<Edge> edges;
  if (n <= 1) return edges;
  if (n == 2) {
    edges.emplace_back(0, 1);
    return edges;
  }
  std::vector<int> code(n - 2);
  for (auto& c : code) c = static_cast<int>(uniform_below(rng, n));
  std::vector<int> degree(n, 1);
  for (int c : code) ++degree[c];
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.push(v);
  }
  for (int c : code) {
    const int leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, c);
    if (--degree[c] == 1) leaves.push(c);
  }
  const int a = leaves.top();
  leaves.pop();
  edges.emplace_back(a, leaves.top());
  return edges;
}

}  // namespace

Graph gen_line(int n) {
  require(n >= 2, "line needs n >= 2");
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

Graph gen_ring(int n) {
  require(n >= 2, "ring needs n >= 2");
  return Graph(n, ring_edges(n));
}

Graph gen_g4(int n) { return gen_g4_minus(n, {}); }

Graph gen_g4_minus(int n, std::span<const NodeId> deleted_chords) {
  require(n >= 5, "G4 needs n >= 5");
  std::vector<char> removed(n, 0);
  for (NodeId i : deleted_chords) {
    require(i >= 0 && i < n, "chord id out of range");
    require(!removed[i], "duplicate chord id " + std::to_string(i));
    removed[i] = 1;
  }
  auto e = ring_edges(n);
  for (int i = 0; i < n; ++i) {
    // chord (i, i+2) has midpoint i+1
    if (!removed[(i + 1) % n]) e.emplace_back(i, (i + 2) % n);
  }
  return Graph(n, e);
}

Graph gen_grid(int side) {
  require(side >= 2, "grid needs side >= 2");
  std::vector<Edge> e;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const int id = r * side + c;
      if (c + 1 < side) e.emplace_back(id, id + 1);
      if (r + 1 < side) e.emplace_back(id, id + side);
    }
  }
  return Graph(side * side, e);
}

Graph gen_star(int leaves) {
  require(leaves >= 1, "star needs at least one leaf");
  std::vector<Edge> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, e);
}

Graph gen_complete(int n) {
  require(n >= 1, "complete graph needs n >= 1");
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return Graph(n, e);
}

Graph gen_tree_random(int n, std::uint64_t seed) {
  require(n >= 1, "tree needs n >= 1");
  Rng rng(seed);
  return Graph(n, pruefer_tree_edges(n, rng));
}

Graph gen_tree_recursive(int n, std::uint64_t seed) {
  require(n >= 1, "tree needs n >= 1");
  Rng rng(seed);
  std::vector<Edge> e;
  e.reserve(n);
  for (NodeId v = 1; v < n; ++v) e.emplace_back(static_cast<NodeId>(uniform_below(rng, v)), v);
  return Graph(n, e);
}

Graph gen_er(int n, double p, std::uint64_t seed) {
  require(n >= 1, "G(n,p) needs n >= 1");
  require(p >= 0.0 && p <= 1.0, "G(n,p) needs 0 <= p <= 1");
  Rng rng(seed);
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (uniform01(rng) < p) e.emplace_back(u, v);
    }
  }
  return Graph(n, e);
}

Graph gen_ba(int n, int m0, int m, std::uint64_t seed) {
  require(n >= 1, "BA needs n >= 1");
  require(m0 >= 1 && m >= 1, "BA needs m0 >= 1 and m >= 1");
  Rng rng(seed);
  const int start = std::min(n, m0);
  std::vector<Edge> edges = pruefer_tree_edges(start, rng);
  // Each endpoint occurrence is one ticket; sampling a ticket is degree-proportional.
  std::vector<NodeId> tickets;
  for (auto [u, v] : edges) {
    tickets.push_back(u);
    tickets.push_back(v);
  }
  std::vector<NodeId> chosen;
  for (int v = start; v < n; ++v) {
    const int want = std::min(m, v);
    chosen.clear();
    while (static_cast<int>(chosen.size()) < want) {
      NodeId t = tickets.empty() ? static_cast<NodeId>(uniform_below(rng, v))
                                 : tickets[uniform_below(rng, tickets.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (NodeId t : chosen) {
      edges.emplace_back(t, v);
      tickets.push_back(t);
      tickets.push_back(v);
    }
  }
  return Graph(n, edges);
}

Graph add_random_edges(const Graph& g, int count, std::uint64_t seed) {
  const long long n = g.n();
  const long long missing = n * (n - 1) / 2 - static_cast<long long>(g.edge_count());
  require(count >= 0 && count <= missing, "cannot add that many new edges");
  Rng rng(seed);
  std::set<Edge> present(g.edges().begin(), g.edges().end());
  std::vector<Edge> edges = g.edges();
  while (count > 0) {
    NodeId u = static_cast<NodeId>(uniform_below(rng, n));
    NodeId v = static_cast<NodeId>(uniform_below(rng, n));
    if (u == v) continue;
    Edge e{std::min(u, v), std::max(u, v)};
    if (present.insert(e).second) {
      edges.push_back(e);
      --count;
    }
  }
  return Graph(g.n(), edges);
}

// ---------------------------------------------------------------------------
// Queries

bool is_connected(const Graph& g, const NodeSet& s) {
  if (s.empty()) throw InvalidArgument("connectivity of an empty node set is undefined");
  s.check_range(g.n());
  if (s.size() == 1) return true;
  // 0 = outside, 1 = member unvisited, 2 = visited
  std::vector<char> state(g.n(), 0);
  for (NodeId v : s) state[v] = 1;
  std::vector<NodeId> stack{s[0]};
  state[s[0]] = 2;
  std::size_t seen = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(v)) {
      if (state[w] == 1) {
        state[w] = 2;
        ++seen;
        stack.push_back(w);
      }
    }
  }
  return seen == s.size();
}

bool is_connected(const Graph& g) {
  if (g.n() == 0) return true;
  return is_connected(g, g.all_nodes());
}

std::vector<int> bfs_distances(const Graph& g, NodeId source) {
  std::vector<int> dist(g.n(), -1);
  std::vector<NodeId> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

SpanningTree bfs_spanning_tree(const Graph& g, NodeId root) {
  if (root < 0 || root >= g.n()) throw InvalidArgument("BFS root out of range");
  SpanningTree t;
  t.root = root;
  t.parent.assign(g.n(), -1);
  t.depth.assign(g.n(), -1);
  std::vector<NodeId> queue{root};
  t.depth[root] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId w : g.neighbors(v)) {
      if (t.depth[w] < 0) {
        t.depth[w] = t.depth[v] + 1;
        t.parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  if (static_cast<int>(queue.size()) != g.n()) {
    throw Infeasible("BFS spanning tree requested on a disconnected graph");
  }
  return t;
}

RadiusCenter radius_and_center(const Graph& g) {
  if (g.n() == 0) throw InvalidArgument("radius of an empty graph");
  RadiusCenter best{std::numeric_limits<int>::max(), 0};
  std::vector<int> dist(g.n());
  std::vector<NodeId> queue;
  queue.reserve(g.n());
  for (NodeId s = 0; s < g.n(); ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.assign(1, s);
    dist[s] = 0;
    int ecc = 0;
    bool pruned = false;
    for (std::size_t head = 0; head < queue.size() && !pruned; ++head) {
      const NodeId v = queue[head];
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] >= 0) continue;
        dist[w] = dist[v] + 1;
        ecc = dist[w];
        // cannot beat (or tie with a smaller id) the current best
        if (ecc >= best.radius) {
          pruned = true;
          break;
        }
        queue.push_back(w);
      }
    }
    if (pruned) continue;
    if (static_cast<int>(queue.size()) != g.n()) {
      throw Infeasible("radius requested on a disconnected graph");
    }
    best = {ecc, s};
  }
  return best;
}

std::vector<NodeSet> components(const Graph& g) {
  std::vector<int> label(g.n(), -1);
  std::vector<NodeSet> out;
  for (NodeId s = 0; s < g.n(); ++s) {
    if (label[s] >= 0) continue;
    std::vector<NodeId> members{s};
    label[s] = static_cast<int>(out.size());
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (NodeId w : g.neighbors(members[head])) {
        if (label[w] < 0) {
          label[w] = label[s];
          members.push_back(w);
        }
      }
    }
    out.emplace_back(std::move(members));
  }
  return out;
}

Graph induced_subgraph(const Graph& g, const NodeSet& s) {
  s.check_range(g.n());
  std::vector<int> local(g.n(), -1);
  for (std::size_t i = 0; i < s.size(); ++i) local[s[i]] = static_cast<int>(i);
  std::vector<Edge> e;
  for (auto [u, v] : g.edges()) {
    if (local[u] >= 0 && local[v] >= 0) e.emplace_back(local[u], local[v]);
  }
  return Graph(static_cast<int>(s.size()), e);
}

bool is_hub(const Graph& g, const NodeSet& hub, const NodeSet& target) {
  if (hub.empty() || !is_connected(g, hub)) return false;
  for (NodeId u : target) {
    const auto nb = g.neighbors(u);
    if (std::none_of(nb.begin(), nb.end(), [&](NodeId w) { return hub.contains(w); })) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// I/O

void write_graph(std::ostream& out, const Graph& g) {
  out << "n " << g.n() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<Edge> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (n < 0) {
      std::string tag;
      if (!(ls >> tag >> n) || tag != "n" || n < 0) {
        throw FormatError("graph line " + std::to_string(lineno) + ": expected 'n <count>'");
      }
      continue;
    }
    NodeId u, v;
    std::string rest;
    if (!(ls >> u >> v) || (ls >> rest)) {
      throw FormatError("graph line " + std::to_string(lineno) + ": expected 'u v'");
    }
    edges.emplace_back(u, v);
  }
  if (n < 0) throw FormatError("graph file has no 'n <count>' header");
  try {
    return Graph(n, edges);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("graph file: ") + e.what());
  }
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_graph(out, g);
  if (!out) throw IoError("write failed: " + path);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_graph(in);
}

}  // namespace gsr
