// Command-line front end: graph generation, plan construction, verification,
// recovery and the figure experiments.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsr/constructions.hpp"
#include "gsr/experiments.hpp"
#include "gsr/partition.hpp"
#include "gsr/random.hpp"
#include "gsr/recovery.hpp"
#include "gsr/reduction.hpp"
#include "gsr/verification.hpp"

namespace {

using namespace gsr;

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kBadFlags = 2,
  kIo = 3,
  kInfeasible = 4,
  kVerifyFailed = 5,
};

struct Global {
  std::uint64_t seed = 1;
  int trials = 0;  // 0: experiment default
  std::string out;
  std::string format = "csv";
  std::string config;
};

struct GraphSpec {
  std::string graph;  // family name or file
  int n = 0;
  int side = 0;
  double p = 0.0;
  int m0 = 10;
  int m = 1;
  std::vector<int> deleted;
};

const std::vector<std::string> kFamilies = {"line",      "ring", "g4",   "g4_minus",
                                            "grid",      "star", "complete", "tree",
                                            "recursive_tree", "er", "ba"};

bool is_family(const std::string& s) {
  return std::find(kFamilies.begin(), kFamilies.end(), s) != kFamilies.end();
}

void add_graph_options(CLI::App* cmd, GraphSpec& spec) {
  cmd->add_option("--graph", spec.graph, "Graph family or graph file")->required();
  cmd->add_option("--n", spec.n, "Node count");
  cmd->add_option("--side", spec.side, "Grid side length");
  cmd->add_option("--p", spec.p, "Edge probability (er)");
  cmd->add_option("--m0", spec.m0, "Seed tree size (ba)");
  cmd->add_option("--m", spec.m, "Links per new node (ba)");
  cmd->add_option("--deleted", spec.deleted, "Chord midpoints removed (g4_minus)");
}

Graph make_graph(const GraphSpec& s, std::uint64_t seed) {
  const auto& f = s.graph;
  if (!is_family(f)) return load_graph(f);
  if (f == "line") return gen_line(s.n);
  if (f == "ring") return gen_ring(s.n);
  if (f == "g4") return gen_g4(s.n);
  if (f == "g4_minus") return gen_g4_minus(s.n, s.deleted);
  if (f == "grid") return gen_grid(s.side);
  if (f == "star") return gen_star(s.n - 1);
  if (f == "complete") return gen_complete(s.n);
  if (f == "tree") return gen_tree_random(s.n, seed);
  if (f == "recursive_tree") return gen_tree_recursive(s.n, seed);
  if (f == "er") return gen_er(s.n, s.p, seed);
  return gen_ba(s.n, s.m0, s.m, seed);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs `body` with stdout or the --out file as its stream.
template <typename F>
void with_output(const std::string& path, F&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  body(out);
  if (!out) throw IoError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------

int cmd_graph(const GraphSpec& spec, const Global& g) {
  const Graph graph = make_graph(spec, g.seed);
  with_output(g.out, [&](std::ostream& o) { write_graph(o, graph); });
  std::cerr << "nodes " << graph.n() << ", edges " << graph.edge_count() << '\n';
  return kOk;
}

struct ConstructOptions {
  std::string method = "algorithm1";
  int k = 1;
  double budget = 2.0;
  int root = -1;
  int rows = 0;
  std::string partition;
  std::string matrix;
  std::string trace;
};

int cmd_construct(const GraphSpec& spec, const ConstructOptions& o, const Global& g) {
  FParams fp;
  fp.budget_factor = o.budget;
  fp.seed = derive_seed(g.seed, 1);
  const std::string& m = o.method;
  MeasurementPlan plan;
  std::optional<Graph> graph;
  auto need_graph = [&]() -> const Graph& {
    if (!graph) graph = make_graph(spec, g.seed);
    return *graph;
  };
  if (m == "complete") {
    plan = construct_complete(spec.n > 0 ? spec.n : need_graph().n(), o.k, fp);
  } else if (m == "line_k") {
    plan = construct_line_k(spec.n > 0 ? spec.n : need_graph().n(), o.k);
  } else if (m == "line_1") {
    plan = construct_line_1(spec.n > 0 ? spec.n : need_graph().n());
  } else if (m == "g4") {
    plan = construct_g4(spec.n > 0 ? spec.n : need_graph().n(), o.k, fp);
  } else if (m == "g4_minus") {
    plan = construct_g4_minus(spec.n, NodeSet(spec.deleted), o.k, fp);
  } else if (m == "grid") {
    plan = construct_grid(spec.side, o.k, fp);
  } else if (m == "markov") {
    if (o.rows < 1) throw InvalidArgument("markov needs --rows >= 1");
    plan = sample_markov_rows(spec.n > 0 ? spec.n : need_graph().n(), o.rows, fp.seed);
  } else if (m == "tree") {
    const Graph& t = need_graph();
    plan = construct_tree(t, o.root >= 0 ? o.root : radius_and_center(t).center, o.k, fp);
  } else if (m == "partition") {
    if (o.partition.empty()) throw InvalidArgument("partition needs --partition FILE");
    std::istringstream in(read_file(o.partition));
    plan = construct_from_partition(need_graph(), read_partition(in), o.k, fp);
  } else if (m == "er_partition") {
    const auto r = er_random_2partition(need_graph(), g.seed, g.trials > 0 ? g.trials : 100);
    if (!r.partition) {
      throw Infeasible("no random 2-partition found in " + std::to_string(r.attempts) + " trials");
    }
    plan = construct_from_partition(need_graph(), *r.partition, o.k, fp);
  } else if (m == "algorithm1") {
    const Graph& gr = need_graph();
    if (is_connected(gr)) {
      const auto r = algorithm1(gr, o.k, fp);
      plan = r.plan;
      if (!o.trace.empty()) with_output(o.trace, [&](std::ostream& s) { write_trace(s, r.trace); });
    } else {
      plan = algorithm1_by_component(gr, o.k, fp);
    }
  } else if (m == "spanning_tree") {
    plan = spanning_tree_baseline(need_graph(), o.k, fp);
  } else {
    throw InvalidArgument("unknown method '" + m + "'");
  }
  const Graph& target = need_graph();
  if (target.n() != plan.n) {
    throw Infeasible("plan has " + std::to_string(plan.n) + " nodes, graph has " +
                     std::to_string(target.n()));
  }
  if (const auto feas = check_feasibility(target, plan); !feas) {
    throw Infeasible("row " + std::to_string(*feas.offending_row) +
                     " is not connected in the given graph");
  }
  with_output(g.out, [&](std::ostream& s) { s << plan_to_json(plan) << '\n'; });
  if (!o.matrix.empty()) {
    with_output(o.matrix, [&](std::ostream& s) { write_matrix_csv(s, DenseMatrix(plan)); });
  }
  std::cerr << "rows " << plan.row_count() << ", groups " << plan.groups.size()
            << (plan.verified ? "" : " (unverified blocks)") << '\n';
  return kOk;
}

int cmd_verify(const GraphSpec& spec, const std::string& plan_path, int k, std::uint64_t budget,
               const Global& g) {
  const MeasurementPlan plan = load_plan(plan_path);
  const Graph graph = make_graph(spec, g.seed);
  const auto feas = check_feasibility(graph, plan);
  const auto id = check_identifiability(plan, k > 0 ? k : plan.k, budget);
  with_output(g.out, [&](std::ostream& s) {
    s << "feasible: " << (feas ? "true" : "false") << '\n';
    if (!feas) s << "offending_row: " << *feas.offending_row << '\n';
    write_report(s, id);
  });
  return feas && id.verdict != Verdict::Fail ? kOk : kVerifyFailed;
}

int cmd_measure(const std::string& plan_path, const std::string& x_path, double hub_sd,
                double noise_norm, const Global& g) {
  const MeasurementPlan plan = load_plan(plan_path);
  std::istringstream in(read_file(x_path));
  const auto x = read_dense_csv(in);
  auto y = gsr::apply(plan, x);
  Rng rng(g.seed);
  if (hub_sd > 0.0) {
    for (const auto& grp : plan.groups) {
      if (grp.hub_sum_row) y[*grp.hub_sum_row] += hub_sd * gaussian(rng);
    }
  }
  if (noise_norm > 0.0) {
    std::vector<double> w(y.size(), 0.0);
    double norm = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (plan.row_meta[i].is_hub_sum) continue;
      w[i] = gaussian(rng);
      norm += w[i] * w[i];
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < y.size() && norm > 0; ++i) y[i] += w[i] * noise_norm / norm;
  }
  with_output(g.out, [&](std::ostream& s) { write_dense_csv(s, y); });
  return kOk;
}

int cmd_recover(const std::string& plan_path, const std::string& y_path, bool hub_errors,
                double tol, const Global& g) {
  const MeasurementPlan plan = load_plan(plan_path);
  std::istringstream in(read_file(y_path));
  const auto y = read_dense_csv(in);
  const auto r = hub_errors ? recover_with_hub_errors(plan, y, tol) : recover_groupwise(plan, y, tol);
  with_output(g.out, [&](std::ostream& s) {
    if (g.format == "json") {
      nlohmann::json j;
      j["x"] = r.x;
      j["residual_l2"] = r.residual_l2;
      j["converged"] = r.converged();
      nlohmann::json e = nlohmann::json::object();
      for (auto [row, v] : r.hub_error_estimates) e[std::to_string(row)] = v;
      j["hub_error_estimates"] = e;
      s << j.dump(1) << '\n';
    } else {
      write_recovery(s, r);
    }
  });
  return r.converged() ? kOk : kInfeasible;
}

int cmd_experiment(const std::string& which, int n, int threads, const Global& g) {
  ExperimentConfig c = ExperimentConfig::defaults(which);
  c.seed = g.seed;
  if (g.trials > 0) c.trials = g.trials;
  if (n > 0) c.n = n;
  if (threads > 0) c.threads = threads;
  if (!g.config.empty()) apply_config_json(c, read_file(g.config));
  if (c.experiment != which) throw InvalidArgument("config names a different experiment");
  const ResultTable t = run_experiment(c);
  with_output(g.out, [&](std::ostream& s) {
    if (g.format == "json") {
      write_table_json(s, t);
    } else {
      write_table_csv(s, t);
    }
  });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-constrained compressed sensing toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Master random seed");
  app.add_option("--trials", g.trials, "Trial count (experiments, random partitions)");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "Table and recovery output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config, "JSON file whose fields override the flags");

  GraphSpec graph_spec;
  auto* graph_cmd = app.add_subcommand("graph", "Generate a graph file");
  add_graph_options(graph_cmd, graph_spec);

  ConstructOptions co;
  GraphSpec construct_spec;
  auto* construct_cmd = app.add_subcommand("construct", "Build a measurement plan");
  add_graph_options(construct_cmd, construct_spec);
  construct_cmd->add_option("--method", co.method, "Construction")
      ->required()
      ->check(CLI::IsMember({"complete", "line_k", "line_1", "g4", "g4_minus", "grid", "markov",
                             "tree", "partition", "er_partition", "algorithm1", "spanning_tree"}));
  construct_cmd->add_option("--k", co.k, "Target sparsity");
  construct_cmd->add_option("--budget", co.budget, "Row budget factor for k >= 2 blocks");
  construct_cmd->add_option("--root", co.root, "Tree root (default: a centre)");
  construct_cmd->add_option("--rows", co.rows, "Row count (markov)");
  construct_cmd->add_option("--partition", co.partition, "Partition file (partition)");
  construct_cmd->add_option("--matrix", co.matrix, "Also write the 0/1 matrix as CSV");
  construct_cmd->add_option("--trace", co.trace, "Write the Algorithm 1 trace");

  GraphSpec verify_spec;
  std::string verify_plan;
  int verify_k = 0;
  std::uint64_t verify_budget = kDefaultSubsetBudget;
  auto* verify_cmd = app.add_subcommand("verify", "Check feasibility and identifiability");
  add_graph_options(verify_cmd, verify_spec);
  verify_cmd->add_option("--plan", verify_plan, "Plan file")->required();
  verify_cmd->add_option("--k", verify_k, "Sparsity (default: the plan's)");
  verify_cmd->add_option("--budget", verify_budget, "Maximum column subsets examined");

  std::string measure_plan, measure_x;
  double hub_sd = 0.0, noise_norm = 0.0;
  auto* measure_cmd = app.add_subcommand("measure", "Apply a plan to a signal");
  measure_cmd->add_option("--plan", measure_plan, "Plan file")->required();
  measure_cmd->add_option("--x", measure_x, "Dense signal file")->required();
  measure_cmd->add_option("--hub-error-sd", hub_sd, "Gaussian error on hub-sum rows");
  measure_cmd->add_option("--noise-norm", noise_norm, "l2 norm of noise on other rows");

  std::string recover_plan, recover_y;
  bool hub_errors = false;
  double tol = 1e-9;
  auto* recover_cmd = app.add_subcommand("recover", "Recover a sparse signal");
  recover_cmd->add_option("--plan", recover_plan, "Plan file")->required();
  recover_cmd->add_option("--y", recover_y, "Measurement file")->required();
  recover_cmd->add_flag("--hub-errors", hub_errors, "Estimate one error per hub-sum row");
  recover_cmd->add_option("--tol", tol, "Solver tolerance")->check(CLI::PositiveNumber);

  std::string which;
  int exp_n = 0, threads = 0;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a figure experiment");
  exp_cmd->add_option("which", which, "fig6 | fig7 | fig8")
      ->required()
      ->check(CLI::IsMember({"fig6", "fig7", "fig8"}));
  exp_cmd->add_option("--n", exp_n, "Node count");
  exp_cmd->add_option("--threads", threads, "Worker threads (default GSR_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadFlags;
  }

  try {
    if (*graph_cmd) return cmd_graph(graph_spec, g);
    if (*construct_cmd) return cmd_construct(construct_spec, co, g);
    if (*verify_cmd) return cmd_verify(verify_spec, verify_plan, verify_k, verify_budget, g);
    if (*measure_cmd) return cmd_measure(measure_plan, measure_x, hub_sd, noise_norm, g);
    if (*recover_cmd) return cmd_recover(recover_plan, recover_y, hub_errors, tol, g);
    if (*exp_cmd) return cmd_experiment(which, exp_n, threads, g);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
