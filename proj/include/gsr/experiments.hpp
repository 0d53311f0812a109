#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsr/graph.hpp"
#include "gsr/plan.hpp"

namespace gsr {

struct ExperimentConfig {
  std::string experiment = "fig6";  // fig6 | fig7 | fig8
  int n = 1000;
  int trials = 100;
  std::uint64_t seed = 1;
  double budget_factor = 2.0;
  int k = 1;
  /// fig6: links added per step.
  int link_step = 25;
  /// fig6: starting tree, "recursive" (uniform attachment) or "pruefer"
  /// (uniform labelled tree).
  std::string tree_model = "recursive";
  /// fig7: node counts; fig8 uses n.
  std::vector<int> sizes{64, 128, 256, 512, 1024};
  /// BA links per new node (fig7 sweep; fig8 uses the first entry).
  std::vector<int> ba_m{1, 2, 3};
  int ba_m0 = 10;
  /// fig8: support sizes.
  std::vector<int> sparsities;
  /// fig8: l2 norm of the measurement noise on non-hub rows.
  double noise_norm = 2.0;
  /// 0 means GSR_THREADS, or the hardware concurrency when unset.
  int threads = 0;

  /// Paper-scale defaults for fig6, fig7 or fig8. Throws InvalidArgument otherwise.
  static ExperimentConfig defaults(const std::string& experiment);
  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

/// Overrides config fields from a JSON object; unknown keys are rejected.
void apply_config_json(ExperimentConfig& config, const std::string& json_text);

/// Numeric table with named columns, one row per x-axis point.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] int column_index(const std::string& name) const;
  [[nodiscard]] std::vector<double> column(const std::string& name) const;

  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

void write_table_csv(std::ostream& out, const ResultTable& t);
ResultTable read_table_csv(std::istream& in);
void write_table_json(std::ostream& out, const ResultTable& t);

/// Thread count from `requested`, GSR_THREADS and the hardware, at least 1.
int resolve_threads(int requested);

/// Calls fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
};
Summary summarize(const std::vector<double>& v);

/// Random tree grown by `link_step` random links per step up to 2n - 1 links;
/// Algorithm 1 with k = 1 at every step. Columns: links, mean_measurements,
/// std_measurements, min_measurements, max_measurements, mean_radius,
/// mean_upper_bound.
ResultTable run_fig6(const ExperimentConfig& config);

/// BA graphs over `sizes` and `ba_m`. Columns: n, m, mean_measurements,
/// std_measurements, min_measurements, max_measurements, mean_radius.
ResultTable run_fig7(const ExperimentConfig& config);

/// The hub-error instance: a BA graph whose Algorithm 1 groups are two large
/// groups followed by two tiny ones. Large groups get ceil(n_i / 2) random
/// subset rows plus their hub-sum row; tiny groups are measured directly.
struct Fig8Instance {
  Graph graph;
  MeasurementPlan plan;
  std::vector<int> group_sizes;
  std::uint64_t graph_seed = 0;
  int seeds_scanned = 0;
};
Fig8Instance build_fig8_instance(const ExperimentConfig& config);

/// Mean l2 errors per support size k. "ours" is augmented hub-error
/// recovery; "l1" is l1 on the whole matrix; "l1_groupwise" decodes group
/// by group subtracting the (corrupted) hub-sum rows. Clean runs carry hub
/// errors only, noisy runs add measurement noise. Columns: k, ours_clean,
/// l1_clean, ours_noisy, l1_noisy, l1_groupwise_clean, l1_groupwise_noisy,
/// max_ours_clean, nonconverged.
ResultTable run_fig8(const ExperimentConfig& config);
ResultTable run_fig8(const ExperimentConfig& config, const Fig8Instance& instance);

ResultTable run_experiment(const ExperimentConfig& config);

}  // namespace gsr
