#pragma once

#include <cstdint>
#include <vector>

#include "gsr/graph.hpp"
#include "gsr/plan.hpp"
#include "gsr/verification.hpp"

namespace gsr {

/// Parameters of the unconstrained (complete-graph) block construction f(k, n).
struct FParams {
  /// Row budget multiplier for the random k >= 2 construction.
  double budget_factor = 2.0;
  std::uint64_t seed = 0;
  /// Fresh random matrices tried before giving up at checkable sizes.
  int retry_limit = 64;
  /// Subset budget handed to check_identifiability for each block.
  std::uint64_t verify_budget = kDefaultSubsetBudget;

  [[nodiscard]] FParams with_seed(std::uint64_t s) const {
    FParams p = *this;
    p.seed = s;
    return p;
  }
};

/// Row count f(k, n) of the complete-graph block.
///
/// k = 1: ceil(log2(n + 1)) rows of binary codes.
/// k >= 2: ceil(c * 2k * log2(n / 2k + 2)) Bernoulli(1/2) rows, capped at n,
/// where the cap is met by measuring every node directly.
int f_rows(int k, int n, double budget_factor = 2.0);

/// Rows of a k-sparse identifying 0-1 matrix over local columns 0..n-1.
struct CompleteBlock {
  std::vector<std::vector<int>> rows;
  bool verified = true;
  int attempts = 1;
};

CompleteBlock complete_block(int n, int k, const FParams& params);

/// The f(k, n) baseline as a plan over n unconstrained nodes. Throws
/// Infeasible if the random construction cannot be verified within the retry limit.
MeasurementPlan construct_complete(int n, int k, const FParams& params = {});

/// Intervals [i, i + t - 1] for i = 1..k*t + 1 with t = ceil(n / (k + 1)).
/// Starts beyond n are clamped to the last node.
MeasurementPlan construct_line_k(int n, int k);

/// ceil((n + 1) / 2) chained intervals overlapping in one node; identifies
/// 1-sparse vectors on a line (and hence on a ring).
MeasurementPlan construct_line_1(int n);

/// One hub-sum row plus one row W + hub for every row W of the f(k, |target|) block.
/// Throws Infeasible unless `hub` is a hub for `target` and the two are disjoint.
MeasurementPlan construct_hub_based(const Graph& g, const NodeSet& target, const NodeSet& hub,
                                    int k, const FParams& params = {});

/// G4: paper-even nodes decoded through the paper-odd hub, then the reverse.
MeasurementPlan construct_g4(int n, int k, const FParams& params = {});

/// G4 without the chords centred at `deleted`: those nodes are measured
/// directly, the rest through parity hubs enlarged by same-parity deleted nodes.
MeasurementPlan construct_g4_minus(int n, const NodeSet& deleted, int k,
                                   const FParams& params = {});

/// Grid in three stages: two column-parity hubs (each with a hub-sum row),
/// then row 0 through row 1, whose values are known by then.
MeasurementPlan construct_grid(int side, int k, const FParams& params = {});

/// Layer-by-layer tree plan. Each row is W plus the ancestors of W up to
/// their lowest common ancestor; those ancestors are the row's hub nodes.
MeasurementPlan construct_tree(const Graph& tree, NodeId root, int k, const FParams& params = {});

/// Rows sampled from the no-two-consecutive-zeros Markov chain (first node
/// always included). Feasible on G4.
MeasurementPlan sample_markov_rows(int n, int num_rows, std::uint64_t seed);

}  // namespace gsr
