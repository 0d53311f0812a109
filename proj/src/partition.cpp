#include "gsr/partition.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "gsr/random.hpp"

namespace gsr {

PartitionCheck is_r_partition(const Graph& g, const Partition& p) {
  std::vector<char> covered(g.n(), 0);
  for (const auto& grp : p.groups) {
    grp.check_range(g.n());
    for (NodeId v : grp) {
      if (covered[v]) throw InvalidArgument("partition groups overlap at node " + std::to_string(v));
      covered[v] = 1;
    }
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
    return {false, -1, "groups do not cover every node"};
  }
  const NodeSet all = g.all_nodes();
  for (std::size_t i = 0; i < p.groups.size(); ++i) {
    const int gi = static_cast<int>(i);
    const NodeSet rest = all.minus(p.groups[i]);
    if (rest.empty()) return {false, gi, "complement is empty"};
    if (!is_connected(g, rest)) return {false, gi, "complement is not connected"};
    for (NodeId u : p.groups[i]) {
      const auto nb = g.neighbors(u);
      if (std::none_of(nb.begin(), nb.end(), [&](NodeId w) { return rest.contains(w); })) {
        return {false, gi, "node " + std::to_string(u) + " has no neighbour in the complement"};
      }
    }
  }
  return {};
}

MeasurementPlan construct_from_partition(const Graph& g, const Partition& p, int k,
                                         const FParams& params) {
  const auto check = is_r_partition(g, p);
  if (!check) {
    throw Infeasible("not an r-partition (group " + std::to_string(check.group) +
                     "): " + check.reason);
  }
  const NodeSet all = g.all_nodes();
  MeasurementPlan plan;
  plan.n = g.n();
  plan.k = k;
  for (std::size_t i = 0; i < p.groups.size(); ++i) {
    plan.append(construct_hub_based(g, p.groups[i], all.minus(p.groups[i]), k,
                                    params.with_seed(derive_seed(params.seed, i))));
  }
  plan.method = "partition";
  plan.validate();
  return plan;
}

RandomPartitionResult er_random_2partition(const Graph& g, std::uint64_t seed, int trials) {
  RandomPartitionResult result;
  const int n = g.n();
  std::vector<NodeId> order(n);
  for (int t = 0; t < trials; ++t) {
    ++result.attempts;
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[i], order[uniform_below(rng, static_cast<std::uint64_t>(i) + 1)]);
    }
    Partition candidate;
    candidate.groups.emplace_back(std::vector<NodeId>(order.begin(), order.begin() + n / 2));
    candidate.groups.emplace_back(std::vector<NodeId>(order.begin() + n / 2, order.end()));
    if (is_r_partition(g, candidate)) {
      result.partition = std::move(candidate);
      return result;
    }
  }
  return result;
}

void write_partition(std::ostream& out, const Partition& p) {
  for (const auto& grp : p.groups) {
    bool first = true;
    for (NodeId v : grp) {
      if (!first) out << ' ';
      out << v;
      first = false;
    }
    out << '\n';
  }
}

Partition read_partition(std::istream& in) {
  Partition p;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<NodeId> ids;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        ids.push_back(std::stoi(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw FormatError("partition file: bad node id '" + tok + "'");
      }
    }
    if (ids.empty()) continue;
    try {
      p.groups.emplace_back(std::move(ids));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("partition file: ") + e.what());
    }
  }
  return p;
}

}  // namespace gsr
