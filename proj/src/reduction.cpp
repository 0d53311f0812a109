#include "gsr/reduction.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "gsr/random.hpp"
#include "gsr/verification.hpp"

namespace gsr {

namespace {
const NodeSet kEmpty;
}

const NodeSet& HubMap::get(NodeId u, NodeId v) const {
  auto it = hubs_.find(key(u, v));
  return it == hubs_.end() ? kEmpty : it->second;
}

void HubMap::set(NodeId u, NodeId v, NodeSet hub) { hubs_[key(u, v)] = std::move(hub); }

void HubMap::erase_incident(NodeId u, const std::set<NodeId>& neighbors) {
  for (NodeId v : neighbors) hubs_.erase(key(u, v));
}

ReducedGraph::ReducedGraph(const Graph& g)
    : adj_(g.n()),
      words_((static_cast<std::size_t>(g.n()) + 63) / 64),
      bits_(words_ * g.n(), 0),
      alive_(g.n(), 1),
      alive_count_(g.n()) {
  for (auto [u, v] : g.edges()) add_edge(u, v);
}

void ReducedGraph::set_bit(NodeId u, NodeId v, bool on) {
  auto& word = bits_[std::size_t(u) * words_ + v / 64];
  const std::uint64_t mask = std::uint64_t{1} << (v % 64);
  word = on ? (word | mask) : (word & ~mask);
}

NodeSet ReducedGraph::nodes() const {
  std::vector<NodeId> ids;
  ids.reserve(alive_count_);
  for (NodeId v = 0; v < original_n(); ++v) {
    if (alive_[v]) ids.push_back(v);
  }
  return NodeSet(std::move(ids));
}

std::size_t ReducedGraph::edge_count() const {
  std::size_t twice = 0;
  for (NodeId v = 0; v < original_n(); ++v) {
    if (alive_[v]) twice += adj_[v].size();
  }
  return twice / 2;
}

ReducedGraph::Compact ReducedGraph::compact() const {
  Compact c;
  std::vector<int> local(original_n(), -1);
  for (NodeId v = 0; v < original_n(); ++v) {
    if (alive_[v]) {
      local[v] = static_cast<int>(c.ids.size());
      c.ids.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (NodeId v : c.ids) {
    for (NodeId w : adj_[v]) {
      if (v < w) edges.emplace_back(local[v], local[w]);
    }
  }
  c.graph = Graph(static_cast<int>(c.ids.size()), edges);
  return c;
}

void ReducedGraph::remove(NodeId u) {
  if (!alive_[u]) throw InvalidArgument("node " + std::to_string(u) + " already removed");
  for (NodeId v : adj_[u]) {
    adj_[v].erase(u);
    set_bit(v, u, false);
    set_bit(u, v, false);
  }
  adj_[u].clear();
  alive_[u] = 0;
  --alive_count_;
}

void ReducedGraph::add_edge(NodeId u, NodeId v) {
  adj_[u].insert(v);
  adj_[v].insert(u);
  set_bit(u, v, true);
  set_bit(v, u, true);
}

namespace {

int compact_index(const ReducedGraph::Compact& c, NodeId v) {
  auto it = std::lower_bound(c.ids.begin(), c.ids.end(), v);
  if (it == c.ids.end() || *it != v) throw InvalidArgument("node is not in the reduced graph");
  return static_cast<int>(it - c.ids.begin());
}

struct LeafSplit {
  NodeSet leaves;
  std::vector<NodeId> parent;  // original ids, indexed by original id; -1 if none
};

LeafSplit leaf_split(const ReducedGraph::Compact& c, NodeId root) {
  const auto tree = bfs_spanning_tree(c.graph, compact_index(c, root));
  const int n = c.graph.n();
  std::vector<char> has_child(n, 0);
  for (int v = 0; v < n; ++v) {
    if (tree.parent[v] >= 0) has_child[tree.parent[v]] = 1;
  }
  LeafSplit out;
  out.parent.assign(c.ids.empty() ? 0 : c.ids.back() + 1, -1);
  std::vector<NodeId> leaf_ids;
  for (int v = 0; v < n; ++v) {
    if (!has_child[v] && n > 1) leaf_ids.push_back(c.ids[v]);
    if (tree.parent[v] >= 0) out.parent[c.ids[v]] = c.ids[tree.parent[v]];
  }
  out.leaves = NodeSet(std::move(leaf_ids));
  return out;
}

}  // namespace

NodeSet leaves(const ReducedGraph& g, NodeId root) { return leaf_split(g.compact(), root).leaves; }

NodeSet leaves(const Graph& g, NodeId root) { return leaves(ReducedGraph(g), root); }

void reduce(ReducedGraph& g, NodeId u, HubMap& hubs) {
  if (!g.alive(u)) throw InvalidArgument("reduce: node " + std::to_string(u) + " is not alive");
  const std::vector<NodeId> nb(g.neighbors(u).begin(), g.neighbors(u).end());
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      const NodeId v = nb[i], w = nb[j];
      if (g.has_edge(v, w)) continue;
      g.add_edge(v, w);
      hubs.set(v, w, hubs.get(v, u).unite(hubs.get(u, w)).unite(NodeSet{u}));
    }
  }
  hubs.erase_incident(u, g.neighbors(u));
  g.remove(u);
}

ReductionResult algorithm1(const Graph& g, int k, const FParams& params) {
  if (g.n() < 1) throw InvalidArgument("algorithm1 needs a nonempty graph");
  if (!is_connected(g)) throw Infeasible("algorithm1 needs a connected graph");

  ReductionResult result;
  auto& plan = result.plan;
  plan.n = g.n();
  plan.k = k;
  plan.method = "algorithm1";
  auto& trace = result.trace;

  ReducedGraph rg(g);
  HubMap hubs;
  int iteration = 0;
  int last_radius = -1;
  while (rg.alive_count() > 1) {
    const auto compact = rg.compact();
    const auto rc = radius_and_center(compact.graph);
    if (last_radius >= 0 && rc.radius >= last_radius) {
      throw std::logic_error("algorithm1: radius did not decrease");
    }
    if (iteration == 0) trace.initial_radius = rc.radius;
    last_radius = rc.radius;
    const NodeId root = compact.ids[rc.center];
    const auto split = leaf_split(compact, root);
    const NodeSet& s = split.leaves;
    const NodeSet core = rg.nodes().minus(s);

    // Hub: remaining nodes, the bridges of edges among them, and the bridge
    // from each leaf to its BFS parent.
    std::vector<NodeId> bridge;
    for (NodeId v : core) {
      for (NodeId w : rg.neighbors(v)) {
        if (v < w && core.contains(w)) {
          const auto& h = hubs.get(v, w);
          bridge.insert(bridge.end(), h.begin(), h.end());
        }
      }
    }
    for (NodeId w : s) {
      const auto& h = hubs.get(w, split.parent[w]);
      bridge.insert(bridge.end(), h.begin(), h.end());
    }
    std::sort(bridge.begin(), bridge.end());
    bridge.erase(std::unique(bridge.begin(), bridge.end()), bridge.end());
    const NodeSet hub = core.unite(NodeSet(std::move(bridge)));

    const auto block = complete_block(static_cast<int>(s.size()), k,
                                      params.with_seed(derive_seed(params.seed, iteration)));
    plan.verified = plan.verified && block.verified;
    const int gid = static_cast<int>(plan.groups.size());
    const int hub_row = static_cast<int>(plan.rows.size());
    plan.groups.push_back(Group{s, hub_row, iteration});
    plan.rows.push_back(hub);
    plan.row_meta.push_back(RowMeta{gid, true, {}});
    for (const auto& local : block.rows) {
      std::vector<NodeId> w;
      for (int j : local) w.push_back(s[j]);
      plan.rows.push_back(NodeSet(std::move(w)).unite(hub));
      plan.row_meta.push_back(RowMeta{gid, false, hub});
    }

    IterationRecord rec;
    rec.index = iteration;
    rec.root = root;
    rec.radius = rc.radius;
    rec.alive = rg.alive_count();
    rec.edges = compact.graph.edge_count();
    rec.leaves = s;
    rec.hub_size = static_cast<int>(hub.size());
    rec.rows_emitted = static_cast<int>(block.rows.size()) + 1;
    trace.iterations.push_back(std::move(rec));

    for (NodeId w : s) reduce(rg, w, hubs);
    if (!is_connected(rg.compact().graph)) {
      throw std::logic_error("algorithm1: reduced graph became disconnected");
    }
    ++iteration;
  }
  const NodeSet last = rg.nodes();
  plan.add_direct_group(last, iteration);
  if (trace.iterations.empty()) trace.initial_radius = 0;
  if (trace.group_count() > trace.initial_radius + 1) {
    throw std::logic_error("algorithm1: more iterations than radius + 1");
  }
  plan.validate();
  const auto feasible = check_feasibility(g, plan);
  if (!feasible) {
    throw std::logic_error("algorithm1: row " + std::to_string(*feasible.offending_row) +
                           " is infeasible on the input graph");
  }
  return result;
}

MeasurementPlan algorithm1_by_component(const Graph& g, int k, const FParams& params) {
  MeasurementPlan merged;
  merged.n = g.n();
  merged.k = k;
  const auto comps = components(g);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& ids = comps[c];
    const auto local = algorithm1(induced_subgraph(g, ids), k,
                                  params.with_seed(derive_seed(params.seed, c))).plan;
    auto lift = [&](const NodeSet& s) {
      std::vector<NodeId> out;
      for (NodeId v : s) out.push_back(ids[v]);
      return NodeSet(std::move(out));
    };
    MeasurementPlan part;
    part.n = g.n();
    part.k = k;
    part.verified = local.verified;
    for (const auto& r : local.rows) part.rows.push_back(lift(r));
    for (const auto& m : local.row_meta) part.row_meta.push_back(RowMeta{m.group_id, m.is_hub_sum, lift(m.hub_nodes)});
    for (const auto& grp : local.groups) part.groups.push_back(Group{lift(grp.members), grp.hub_sum_row, grp.recovery_order});
    merged.append(part);
  }
  merged.method = "algorithm1";
  merged.validate();
  return merged;
}

MeasurementPlan spanning_tree_baseline(const Graph& g, int k, const FParams& params) {
  const auto rc = radius_and_center(g);
  const auto bfs = bfs_spanning_tree(g, rc.center);
  std::vector<Edge> edges;
  for (NodeId v = 0; v < g.n(); ++v) {
    if (bfs.parent[v] >= 0) edges.emplace_back(bfs.parent[v], v);
  }
  auto plan = construct_tree(Graph(g.n(), edges), rc.center, k, params);
  plan.method = "spanning_tree";
  return plan;
}

void write_trace(std::ostream& out, const ReductionTrace& trace) {
  out << "# initial_radius=" << trace.initial_radius << " groups=" << trace.group_count() << '\n';
  for (const auto& it : trace.iterations) {
    out << "iteration=" << it.index << " root=" << it.root << " radius=" << it.radius
        << " alive=" << it.alive << " edges=" << it.edges << " leaves=" << it.leaves.size()
        << " hub=" << it.hub_size << " rows=" << it.rows_emitted << '\n';
  }
}

}  // namespace gsr
