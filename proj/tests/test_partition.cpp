#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "gsr/partition.hpp"
#include "gsr/verification.hpp"

using namespace gsr;

namespace {

// Direct restatement of the definition, checked node by node.
bool r_partition_oracle(const Graph& g, const Partition& p) {
  std::vector<int> owner(g.n(), -1);
  for (std::size_t i = 0; i < p.groups.size(); ++i)
    for (NodeId v : p.groups[i]) owner[v] = int(i);
  for (int o : owner)
    if (o < 0) return false;
  for (std::size_t i = 0; i < p.groups.size(); ++i) {
    std::vector<NodeId> rest;
    for (NodeId v = 0; v < g.n(); ++v)
      if (owner[v] != int(i)) rest.push_back(v);
    if (rest.empty()) return false;
    std::vector<int> seen(g.n(), 0);
    std::vector<NodeId> stack{rest[0]};
    seen[rest[0]] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      ++reached;
      for (NodeId w : g.neighbors(v))
        if (owner[w] != int(i) && !seen[w]) seen[w] = 1, stack.push_back(w);
    }
    if (reached != rest.size()) return false;
    for (NodeId u : p.groups[i]) {
      bool touch = false;
      for (NodeId w : g.neighbors(u)) touch |= owner[w] != int(i);
      if (!touch) return false;
    }
  }
  return true;
}

Partition halves(int n, unsigned mask) {
  std::vector<NodeId> a, b;
  for (NodeId v = 0; v < n; ++v) ((mask >> v) & 1 ? a : b).push_back(v);
  return Partition{{NodeSet(a), NodeSet(b)}};
}

}  // namespace

TEST_CASE("r-partition examples") {
  Partition oe{{NodeSet{1, 3, 5, 7}, NodeSet{0, 2, 4, 6}}};
  CHECK(is_r_partition(gen_g4(8), oe).valid);
  CHECK_FALSE(is_r_partition(gen_line(4), Partition{{NodeSet{0, 2}, NodeSet{1, 3}}}).valid);
  CHECK_FALSE(is_r_partition(gen_g4(8), Partition{{gen_g4(8).all_nodes()}}).valid);
  PartitionCheck cover = is_r_partition(gen_g4(8), Partition{{NodeSet{0, 1}, NodeSet{2, 3}}});
  CHECK_FALSE(cover.valid);
  CHECK(cover.group == -1);
  CHECK_THROWS_AS(is_r_partition(gen_g4(8), Partition{{NodeSet{0, 1}, NodeSet{1, 2}}}),
                  InvalidArgument);
}

TEST_CASE("brute force over all 2-splits of small graphs") {
  const std::vector<Graph> graphs{gen_ring(8), gen_g4(8), gen_grid(3), gen_line(6),
                                  gen_complete(6), gen_ba(9, 3, 2, 4)};
  for (const Graph& g : graphs) {
    for (unsigned mask = 1; mask + 1 < (1u << g.n()); ++mask) {
      Partition p = halves(g.n(), mask);
      CHECK(is_r_partition(g, p).valid == r_partition_oracle(g, p));
    }
  }
}

TEST_CASE("no equal split of a ring is a 2-partition") {
  int valid = 0;
  for (unsigned mask = 1; mask + 1 < (1u << 8); ++mask) {
    if (__builtin_popcount(mask) != 4) continue;
    valid += is_r_partition(gen_ring(8), halves(8, mask)).valid;
  }
  // Arcs leave interior nodes without outside neighbours; other splits disconnect.
  CHECK(valid == 0);
}

TEST_CASE("plan from partition") {
  Partition oe{{NodeSet{1, 3, 5, 7}, NodeSet{0, 2, 4, 6}}};
  MeasurementPlan p = construct_from_partition(gen_g4(8), oe, 1);
  CHECK(p.rows == construct_g4(8, 1).rows);
  Partition k6{{NodeSet{0, 1, 2}, NodeSet{3, 4, 5}}};
  MeasurementPlan q = construct_from_partition(gen_complete(6), k6, 1);
  CHECK(q.row_count() == 6);
  CHECK(check_identifiability(q, 1).verdict == Verdict::Pass);
  CHECK_THROWS_AS(construct_from_partition(gen_g4(8), Partition{{gen_g4(8).all_nodes()}}, 1),
                  Infeasible);
}

TEST_CASE("random equal halves") {
  RandomPartitionResult k = er_random_2partition(gen_complete(12), 1, 10);
  REQUIRE(k.partition.has_value());
  CHECK(k.attempts == 1);
  CHECK(k.partition->groups[0].size() == 6);
  RandomPartitionResult r = er_random_2partition(gen_line(10), 1, 10);
  CHECK_FALSE(r.partition.has_value());
  CHECK(r.attempts == 10);
}

TEST_CASE("partition text round trip") {
  Partition p{{NodeSet{0, 2, 4}, NodeSet{1, 3}}};
  std::stringstream ss;
  write_partition(ss, p);
  Partition q = read_partition(ss);
  REQUIRE(q.groups.size() == 2);
  CHECK(q.groups[0] == p.groups[0]);
  CHECK(q.groups[1] == p.groups[1]);
}
