#include "gsr/constructions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "gsr/random.hpp"

namespace gsr {

int f_rows(int k, int n, double budget_factor) {
  if (k < 1) throw InvalidArgument("f(k, n) needs k >= 1");
  if (n < 0) throw InvalidArgument("f(k, n) needs n >= 0");
  if (n == 0) return 0;
  if (k == 1) return std::bit_width(static_cast<unsigned>(n));  // ceil(log2(n + 1))
  const double two_k = 2.0 * k;
  const double rows = std::ceil(budget_factor * two_k * std::log2(n / two_k + 2.0));
  return rows >= n ? n : static_cast<int>(rows);
}

CompleteBlock complete_block(int n, int k, const FParams& params) {
  CompleteBlock block;
  const int m = f_rows(k, n, params.budget_factor);
  if (m == 0) return block;
  if (k == 1) {
    // column j carries the binary code of j + 1; row b holds bit b
    block.rows.resize(m);
    for (int j = 0; j < n; ++j) {
      for (int b = 0; b < m; ++b) {
        if ((j + 1) >> b & 1) block.rows[b].push_back(j);
      }
    }
    return block;
  }
  if (m == n) {
    for (int j = 0; j < n; ++j) block.rows.push_back({j});
    return block;
  }
  for (int attempt = 0; attempt < params.retry_limit; ++attempt) {
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(attempt)));
    DenseMatrix a(m, n);
    std::vector<std::vector<int>> rows(m);
    bool empty_row = false;
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j) {
        if (coin(rng)) {
          rows[r].push_back(j);
          a.set(r, j, 1);
        }
      }
      empty_row = empty_row || rows[r].empty();
    }
    if (empty_row) continue;
    const auto report = check_identifiability(a, k, params.verify_budget);
    if (report.verdict == Verdict::Fail) continue;
    block.rows = std::move(rows);
    block.verified = report.verdict == Verdict::Pass;
    block.attempts = attempt + 1;
    return block;
  }
  throw Infeasible("no identifying random " + std::to_string(m) + "x" + std::to_string(n) +
                   " matrix for k=" + std::to_string(k) + " within " +
                   std::to_string(params.retry_limit) + " attempts");
}

namespace {

NodeSet map_local(const std::vector<int>& local, const NodeSet& targets) {
  std::vector<NodeId> ids;
  ids.reserve(local.size());
  for (int j : local) ids.push_back(targets[j]);
  return NodeSet(std::move(ids));
}

MeasurementPlan single_group_plan(int n, int k, std::string method) {
  MeasurementPlan plan;
  plan.n = n;
  plan.k = k;
  plan.method = std::move(method);
  std::vector<NodeId> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  plan.groups.push_back(Group{NodeSet(std::move(all)), std::nullopt, 0});
  return plan;
}

void require_feasible(const Graph& g, const MeasurementPlan& plan) {
  const auto report = check_feasibility(g, plan);
  if (!report) {
    throw Infeasible(plan.method + ": row " + std::to_string(*report.offending_row) +
                     " is not connected");
  }
}

// Paper node p is id p - 1, so paper-odd nodes are the even ids.
NodeSet ids_with_parity(int n, int parity) {
  std::vector<NodeId> ids;
  for (int i = parity; i < n; i += 2) ids.push_back(i);
  return NodeSet(std::move(ids));
}

}  // namespace

MeasurementPlan construct_complete(int n, int k, const FParams& params) {
  if (n < 1 || k < 1) throw InvalidArgument("complete construction needs n >= 1 and k >= 1");
  auto block = complete_block(n, k, params);
  auto plan = single_group_plan(n, k, "complete");
  plan.verified = block.verified;
  for (auto& r : block.rows) {
    plan.rows.emplace_back(std::move(r));
    plan.row_meta.push_back(RowMeta{0, false, {}});
  }
  return plan;
}

MeasurementPlan construct_line_k(int n, int k) {
  if (k < 2) throw InvalidArgument("line construction for k-sparse vectors needs k >= 2");
  if (n < k + 1) throw InvalidArgument("line construction needs n >= k + 1");
  const int t = (n + k) / (k + 1);
  auto plan = single_group_plan(n, k, "line_k");
  for (int i = 1; i <= k * t + 1; ++i) {
    const int first = std::min(i, n);
    const int last = std::min(i + t - 1, n);
    std::vector<NodeId> ids;
    for (int p = first; p <= last; ++p) ids.push_back(p - 1);
    plan.rows.emplace_back(std::move(ids));
    plan.row_meta.push_back(RowMeta{0, false, {}});
  }
  return plan;
}

MeasurementPlan construct_line_1(int n) {
  if (n < 2) throw InvalidArgument("line construction needs n >= 2");
  // Interval r owns node 2r alone and shares 2r - 1 and 2r + 1 with its neighbours.
  const int m = (n + 2) / 2;
  auto plan = single_group_plan(n, 1, "line_1");
  for (int r = 0; r < m; ++r) {
    std::vector<NodeId> ids;
    for (int v = 2 * r - 1; v <= 2 * r + 1; ++v) {
      if (v >= 0 && v < n) ids.push_back(v);
    }
    plan.rows.emplace_back(std::move(ids));
    plan.row_meta.push_back(RowMeta{0, false, {}});
  }
  if (!columns_distinct_nonzero(DenseMatrix(plan))) {
    throw Infeasible("line_1: interval chain does not separate all nodes");
  }
  return plan;
}

MeasurementPlan construct_hub_based(const Graph& g, const NodeSet& target, const NodeSet& hub,
                                    int k, const FParams& params) {
  target.check_range(g.n());
  hub.check_range(g.n());
  MeasurementPlan plan;
  plan.n = g.n();
  plan.k = k;
  plan.method = "hub";
  if (target.empty()) return plan;
  if (!target.disjoint(hub)) throw InvalidArgument("hub and target overlap");
  if (!is_hub(g, hub, target)) throw Infeasible("node set is not a hub for the target set");

  auto block = complete_block(static_cast<int>(target.size()), k, params);
  plan.verified = block.verified;
  plan.groups.push_back(Group{target, 0, 0});
  plan.rows.push_back(hub);
  plan.row_meta.push_back(RowMeta{0, true, {}});
  for (const auto& local : block.rows) {
    plan.rows.push_back(map_local(local, target).unite(hub));
    plan.row_meta.push_back(RowMeta{0, false, hub});
  }
  require_feasible(g, plan);
  return plan;
}

MeasurementPlan construct_g4(int n, int k, const FParams& params) {
  const Graph g = gen_g4(n);
  const NodeSet paper_odd = ids_with_parity(n, 0);
  const NodeSet paper_even = ids_with_parity(n, 1);
  MeasurementPlan plan;
  plan.n = n;
  plan.k = k;
  plan.append(construct_hub_based(g, paper_even, paper_odd, k, params.with_seed(derive_seed(params.seed, 0))));
  plan.append(construct_hub_based(g, paper_odd, paper_even, k, params.with_seed(derive_seed(params.seed, 1))));
  plan.method = "g4";
  plan.validate();
  return plan;
}

MeasurementPlan construct_g4_minus(int n, const NodeSet& deleted, int k, const FParams& params) {
  deleted.check_range(n);
  const Graph g = gen_g4_minus(n, deleted.ids());
  const NodeSet paper_odd = ids_with_parity(n, 0);
  const NodeSet paper_even = ids_with_parity(n, 1);

  MeasurementPlan plan;
  plan.n = n;
  plan.k = k;
  plan.add_direct_group(deleted, 0);
  const NodeSet hub_a = paper_even.intersect(deleted).unite(paper_odd);
  plan.append(construct_hub_based(g, paper_even.minus(deleted), hub_a, k,
                                  params.with_seed(derive_seed(params.seed, 0))));
  const NodeSet hub_b = paper_odd.intersect(deleted).unite(paper_even);
  plan.append(construct_hub_based(g, paper_odd.minus(deleted), hub_b, k,
                                  params.with_seed(derive_seed(params.seed, 1))));
  plan.method = deleted.empty() ? "g4" : "g4_minus";
  plan.validate();
  require_feasible(g, plan);
  return plan;
}

MeasurementPlan construct_grid(int side, int k, const FParams& params) {
  const Graph g = gen_grid(side);
  const int n = side * side;
  auto id = [side](int r, int c) { return r * side + c; };
  std::vector<NodeId> s1, s2, row0, row1;
  for (int c = 0; c < side; ++c) {
    row0.push_back(id(0, c));
    row1.push_back(id(1, c));
  }
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      // paper's odd columns are the even 0-based columns
      if (r == 0 || c % 2 == 0) s1.push_back(id(r, c));
      if (r == 0 || c % 2 == 1) s2.push_back(id(r, c));
    }
  }
  const NodeSet hub1(s1), hub2(s2), first_row(row0), second_row(row1);
  const NodeSet all = g.all_nodes();

  MeasurementPlan plan;
  plan.n = n;
  plan.k = k;
  auto stage1 = construct_hub_based(g, all.minus(hub1), hub1, k, params.with_seed(derive_seed(params.seed, 0)));
  auto stage2 = construct_hub_based(g, all.minus(hub2), hub2, k, params.with_seed(derive_seed(params.seed, 1)));
  for (auto& grp : stage2.groups) grp.recovery_order = 1;
  plan.append(stage1);
  plan.append(stage2);

  // Stage 3: second row is already decoded, so no hub-sum row.
  auto block = complete_block(side, k, params.with_seed(derive_seed(params.seed, 2)));
  plan.verified = plan.verified && block.verified;
  const int gid = static_cast<int>(plan.groups.size());
  plan.groups.push_back(Group{first_row, std::nullopt, 2});
  for (const auto& local : block.rows) {
    plan.rows.push_back(map_local(local, first_row).unite(second_row));
    plan.row_meta.push_back(RowMeta{gid, false, second_row});
  }
  plan.method = "grid";
  plan.validate();
  require_feasible(g, plan);
  return plan;
}

MeasurementPlan construct_tree(const Graph& tree, NodeId root, int k, const FParams& params) {
  if (tree.n() < 1 || static_cast<int>(tree.edge_count()) != tree.n() - 1 || !is_connected(tree)) {
    throw InvalidArgument("tree construction needs a tree");
  }
  const auto bfs = bfs_spanning_tree(tree, root);
  int depth = 0;
  for (int d : bfs.depth) depth = std::max(depth, d);
  std::vector<std::vector<NodeId>> layers(depth + 1);
  for (NodeId v = 0; v < tree.n(); ++v) layers[bfs.depth[v]].push_back(v);

  MeasurementPlan plan;
  plan.n = tree.n();
  plan.k = k;
  plan.method = "tree";
  plan.add_direct_group(NodeSet{root}, 0);
  for (int layer = 1; layer <= depth; ++layer) {
    const NodeSet members(layers[layer]);
    auto block = complete_block(static_cast<int>(members.size()), k,
                                params.with_seed(derive_seed(params.seed, layer)));
    plan.verified = plan.verified && block.verified;
    const int gid = static_cast<int>(plan.groups.size());
    plan.groups.push_back(Group{members, std::nullopt, layer});
    for (const auto& local : block.rows) {
      const NodeSet w = map_local(local, members);
      // climb in lockstep until the frontier meets in one node
      std::vector<NodeId> frontier(w.begin(), w.end());
      std::vector<NodeId> hub;
      while (frontier.size() > 1) {
        for (auto& v : frontier) v = bfs.parent[v];
        std::sort(frontier.begin(), frontier.end());
        frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
        hub.insert(hub.end(), frontier.begin(), frontier.end());
      }
      NodeSet hub_set(std::move(hub));
      plan.rows.push_back(w.unite(hub_set));
      plan.row_meta.push_back(RowMeta{gid, false, std::move(hub_set)});
    }
  }
  plan.validate();
  require_feasible(tree, plan);
  return plan;
}

MeasurementPlan sample_markov_rows(int n, int num_rows, std::uint64_t seed) {
  if (n < 3) throw InvalidArgument("Markov rows need n >= 3");
  if (num_rows < 1) throw InvalidArgument("Markov rows need num_rows >= 1");
  Rng rng(seed);
  auto plan = single_group_plan(n, 1, "markov");
  plan.verified = false;
  for (int r = 0; r < num_rows; ++r) {
    std::vector<NodeId> ids{0};
    bool prev = true;
    for (int j = 1; j < n; ++j) {
      const bool x = prev ? coin(rng) : true;
      if (x) ids.push_back(j);
      prev = x;
    }
    plan.rows.emplace_back(std::move(ids));
    plan.row_meta.push_back(RowMeta{0, false, {}});
  }
  // for n < 5 the ring-plus-chords graph is complete
  if (n >= 5) require_feasible(gen_g4(n), plan);
  return plan;
}

}  // namespace gsr
