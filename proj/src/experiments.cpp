#include "gsr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gsr/random.hpp"
#include "gsr/recovery.hpp"
#include "gsr/reduction.hpp"
#include "gsr/verification.hpp"

namespace gsr {

// ---------------------------------------------------------------------------
// Configuration

ExperimentConfig ExperimentConfig::defaults(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "fig6") {
    c.n = 1000;
  } else if (experiment == "fig7") {
    c.n = 0;
  } else if (experiment == "fig8") {
    c.n = 500;
    c.ba_m = {3};
    for (int k = 1; k <= 30; ++k) c.sparsities.push_back(k);
  } else {
    throw InvalidArgument("unknown experiment '" + experiment + "' (expected fig6, fig7 or fig8)");
  }
  return c;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument("config: " + what);
  };
  require(experiment == "fig6" || experiment == "fig7" || experiment == "fig8",
          "experiment must be fig6, fig7 or fig8");
  require(trials >= 1, "trials must be >= 1");
  require(budget_factor > 0.0, "budget_factor must be positive");
  require(k >= 1, "k must be >= 1");
  require(ba_m0 >= 1, "ba_m0 must be >= 1");
  require(threads >= 0, "threads must be >= 0");
  if (experiment == "fig6") {
    require(n >= 50, "fig6 needs n >= 50");
    require(link_step >= 1, "link_step must be >= 1");
    require(tree_model == "recursive" || tree_model == "pruefer",
            "tree_model must be recursive or pruefer");
  }
  if (experiment == "fig7") {
    require(!sizes.empty() && !ba_m.empty(), "fig7 needs sizes and ba_m");
    for (int s : sizes) require(s >= 2, "sizes must be >= 2");
    for (int m : ba_m) require(m >= 1, "ba_m entries must be >= 1");
  }
  if (experiment == "fig8") {
    require(n >= 20, "fig8 needs n >= 20");
    require(!ba_m.empty() && ba_m.front() >= 1, "fig8 needs ba_m");
    require(!sparsities.empty(), "fig8 needs sparsities");
    for (int s : sparsities) require(s >= 1 && s <= n, "sparsities must lie in [1, n]");
    require(noise_norm >= 0.0, "noise_norm must be >= 0");
  }
}

void apply_config_json(ExperimentConfig& c, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("config JSON must be an object");
  try {
    for (auto& [key, value] : j.items()) {
      if (key == "experiment") c.experiment = value.get<std::string>();
      else if (key == "n") c.n = value.get<int>();
      else if (key == "trials") c.trials = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "budget_factor") c.budget_factor = value.get<double>();
      else if (key == "k") c.k = value.get<int>();
      else if (key == "link_step") c.link_step = value.get<int>();
      else if (key == "tree_model") c.tree_model = value.get<std::string>();
      else if (key == "sizes") c.sizes = value.get<std::vector<int>>();
      else if (key == "ba_m") c.ba_m = value.get<std::vector<int>>();
      else if (key == "ba_m0") c.ba_m0 = value.get<int>();
      else if (key == "sparsities") c.sparsities = value.get<std::vector<int>>();
      else if (key == "noise_norm") c.noise_norm = value.get<double>();
      else if (key == "threads") c.threads = value.get<int>();
      else throw FormatError("config JSON: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Tables

int ResultTable::column_index(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidArgument("no column '" + name + "'");
  return static_cast<int>(it - columns.begin());
}

std::vector<double> ResultTable::column(const std::string& name) const {
  const int c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

void write_table_csv(std::ostream& out, const ResultTable& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ResultTable read_table_csv(std::istream& in) {
  ResultTable t;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_commas(line);
    if (header) {
      t.columns = std::move(cells);
      header = false;
      continue;
    }
    if (cells.size() != t.columns.size()) throw FormatError("table CSV: ragged row '" + line + "'");
    std::vector<double> r;
    for (const auto& c : cells) r.push_back(parse_double(c));
    t.rows.push_back(std::move(r));
  }
  if (header) throw FormatError("table CSV: missing header");
  return t;
}

void write_table_json(std::ostream& out, const ResultTable& t) {
  nlohmann::json j;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  out << j.dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// Parallel trials

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GSR_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < count && !stop; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

Summary summarize(const std::vector<double>& v) {
  Summary s;
  if (v.empty()) return s;
  double sum = 0.0;
  s.min = s.max = v.front();
  for (double x : v) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(var / static_cast<double>(v.size()));
  return s;
}

// ---------------------------------------------------------------------------
// Fig. 6 and Fig. 7

ResultTable run_fig6(const ExperimentConfig& config) {
  config.validate();
  const int n = config.n;
  const int first = n - 1, last = 2 * n - 1;
  std::vector<int> links;
  for (int l = first; l < last; l += config.link_step) links.push_back(l);
  links.push_back(last);
  const int steps = static_cast<int>(links.size());

  struct Cell {
    double rows = 0, radius = 0, bound = 0;
  };
  std::vector<std::vector<Cell>> cells(config.trials, std::vector<Cell>(steps));
  const int f = f_rows(config.k, n, config.budget_factor);
  FParams fp;
  fp.budget_factor = config.budget_factor;

  parallel_for(config.trials, resolve_threads(config.threads), [&](int t) {
    const std::uint64_t ts = derive_seed(config.seed, static_cast<std::uint64_t>(t));
    Graph g = config.tree_model == "pruefer" ? gen_tree_random(n, derive_seed(ts, 0))
                                             : gen_tree_recursive(n, derive_seed(ts, 0));
    for (int s = 0; s < steps; ++s) {
      if (s > 0) g = add_random_edges(g, links[s] - links[s - 1], derive_seed(ts, s));
      const auto r = algorithm1(g, config.k, fp.with_seed(derive_seed(ts, 1000000 + s)));
      const int radius = r.trace.initial_radius;
      cells[t][s] = {static_cast<double>(r.plan.row_count()), static_cast<double>(radius),
                     static_cast<double>(radius) * f + radius + 1};
    }
  });

  ResultTable table;
  table.columns = {"links",           "mean_measurements", "std_measurements", "min_measurements",
                   "max_measurements", "mean_radius",       "mean_upper_bound"};
  for (int s = 0; s < steps; ++s) {
    std::vector<double> rows, radius, bound;
    for (int t = 0; t < config.trials; ++t) {
      rows.push_back(cells[t][s].rows);
      radius.push_back(cells[t][s].radius);
      bound.push_back(cells[t][s].bound);
    }
    const auto m = summarize(rows);
    table.rows.push_back({static_cast<double>(links[s]), m.mean, m.std, m.min, m.max,
                          summarize(radius).mean, summarize(bound).mean});
  }
  return table;
}

ResultTable run_fig7(const ExperimentConfig& config) {
  config.validate();
  struct Point {
    int n, m;
  };
  std::vector<Point> points;
  for (int n : config.sizes) {
    for (int m : config.ba_m) points.push_back({n, m});
  }
  const int np = static_cast<int>(points.size());
  std::vector<double> rows(static_cast<std::size_t>(np) * config.trials);
  std::vector<double> radius(rows.size());
  FParams fp;
  fp.budget_factor = config.budget_factor;

  parallel_for(static_cast<int>(rows.size()), resolve_threads(config.threads), [&](int idx) {
    const int p = idx / config.trials, t = idx % config.trials;
    const std::uint64_t ps = derive_seed(config.seed, static_cast<std::uint64_t>(p));
    const std::uint64_t ts = derive_seed(ps, static_cast<std::uint64_t>(t));
    const Graph g = gen_ba(points[p].n, config.ba_m0, points[p].m, ts);
    const auto r = algorithm1(g, config.k, fp.with_seed(derive_seed(ts, 1)));
    rows[idx] = static_cast<double>(r.plan.row_count());
    radius[idx] = r.trace.initial_radius;
  });

  ResultTable table;
  table.columns = {"n", "m", "mean_measurements", "std_measurements", "min_measurements",
                   "max_measurements", "mean_radius"};
  for (int p = 0; p < np; ++p) {
    const auto b = rows.begin() + static_cast<std::ptrdiff_t>(p) * config.trials;
    const auto s = summarize(std::vector<double>(b, b + config.trials));
    const auto rb = radius.begin() + static_cast<std::ptrdiff_t>(p) * config.trials;
    const auto rs = summarize(std::vector<double>(rb, rb + config.trials));
    table.rows.push_back({static_cast<double>(points[p].n), static_cast<double>(points[p].m),
                          s.mean, s.std, s.min, s.max, rs.mean});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Fig. 8

namespace {

constexpr int kFig8ScanLimit = 2000;
constexpr int kTinyGroup = 2;

bool fig8_shape(const std::vector<int>& sizes) {
  return sizes.size() == 4 && sizes[0] > kTinyGroup && sizes[1] > kTinyGroup &&
         sizes[2] <= kTinyGroup && sizes[3] <= kTinyGroup;
}

std::vector<double> gaussian_vector(Rng& rng, int n) {
  std::vector<double> v(n);
  for (auto& x : v) x = gaussian(rng);
  return v;
}

void scale_to_norm(std::vector<double>& v, double norm) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s == 0.0) return;
  for (auto& x : v) x *= norm / s;
}

}  // namespace

Fig8Instance build_fig8_instance(const ExperimentConfig& config) {
  config.validate();
  Fig8Instance inst;
  const std::uint64_t scan = derive_seed(config.seed, 0xf18);
  for (int j = 0; j < kFig8ScanLimit; ++j) {
    const std::uint64_t gs = derive_seed(scan, static_cast<std::uint64_t>(j));
    Graph g = gen_ba(config.n, config.ba_m0, config.ba_m.front(), gs);
    const auto r = algorithm1(g, 1);
    std::vector<int> sizes;
    for (const auto& grp : r.plan.groups) sizes.push_back(static_cast<int>(grp.members.size()));
    if (!fig8_shape(sizes)) continue;

    inst.graph = std::move(g);
    inst.group_sizes = sizes;
    inst.graph_seed = gs;
    inst.seeds_scanned = j + 1;
    auto& plan = inst.plan;
    plan.n = config.n;
    plan.k = config.k;
    plan.method = "fig8";
    plan.verified = false;
    Rng rng(derive_seed(gs, 1));
    for (std::size_t gi = 0; gi < r.plan.groups.size(); ++gi) {
      const auto& grp = r.plan.groups[gi];
      const int order = static_cast<int>(gi);
      if (static_cast<int>(grp.members.size()) <= kTinyGroup) {
        plan.add_direct_group(grp.members, order);
        continue;
      }
      const NodeSet& hub = r.plan.rows[*grp.hub_sum_row];
      const int gid = static_cast<int>(plan.groups.size());
      const int hub_row = static_cast<int>(plan.rows.size());
      plan.groups.push_back(Group{grp.members, hub_row, order});
      plan.rows.push_back(hub);
      plan.row_meta.push_back(RowMeta{gid, true, {}});
      const int count = (static_cast<int>(grp.members.size()) + 1) / 2;
      for (int i = 0; i < count; ++i) {
        std::vector<NodeId> w;
        while (w.empty()) {
          for (NodeId v : grp.members) {
            if (coin(rng)) w.push_back(v);
          }
        }
        plan.rows.push_back(NodeSet(std::move(w)).unite(hub));
        plan.row_meta.push_back(RowMeta{gid, false, hub});
      }
    }
    plan.validate();
    if (!check_feasibility(inst.graph, plan)) {
      throw std::logic_error("fig8: generated an infeasible row");
    }
    return inst;
  }
  throw Infeasible("fig8: no BA graph with two large and two tiny groups in " +
                   std::to_string(kFig8ScanLimit) + " seeds");
}

ResultTable run_fig8(const ExperimentConfig& config) {
  return run_fig8(config, build_fig8_instance(config));
}

ResultTable run_fig8(const ExperimentConfig& config, const Fig8Instance& inst) {
  config.validate();
  const auto& plan = inst.plan;
  const int n = plan.n;
  const int m = static_cast<int>(plan.rows.size());
  const PlanDecoder decoder(plan);
  // baseline: l1 on the whole matrix, with no knowledge of groups or hubs
  const BasisPursuit whole(to_eigen(DenseMatrix(plan)));
  std::vector<int> hub_rows, other_rows;
  for (int r = 0; r < m; ++r) (plan.row_meta[r].is_hub_sum ? hub_rows : other_rows).push_back(r);

  const int nk = static_cast<int>(config.sparsities.size());
  const int trials = config.trials;
  struct Cell {
    double ours_clean = 0, l1_clean = 0, ours_noisy = 0, l1_noisy = 0;
    double grp_clean = 0, grp_noisy = 0;
    bool converged = true;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(nk) * trials);

  parallel_for(static_cast<int>(cells.size()), resolve_threads(config.threads), [&](int idx) {
    const int ki = idx / trials, t = idx % trials;
    const int k = config.sparsities[ki];
    Rng rng(derive_seed(derive_seed(config.seed, 100 + static_cast<std::uint64_t>(k)),
                        static_cast<std::uint64_t>(t)));
    // k-sparse x0 on a uniform support, unit l2 norm
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::vector<double> x0(n, 0.0);
    for (int i = 0; i < k; ++i) {
      std::swap(perm[i], perm[i + uniform_below(rng, static_cast<std::uint64_t>(n - i))]);
      x0[perm[i]] = gaussian(rng);
    }
    scale_to_norm(x0, 1.0);
    std::vector<double> clean = gsr::apply(plan, x0);
    for (int r : hub_rows) clean[r] += gaussian(rng);
    auto w = gaussian_vector(rng, static_cast<int>(other_rows.size()));
    scale_to_norm(w, config.noise_norm);
    std::vector<double> noisy = clean;
    for (std::size_t i = 0; i < other_rows.size(); ++i) noisy[other_rows[i]] += w[i];

    auto whole_error = [&](const std::vector<double>& y, bool& ok) {
      const auto r = whole.solve(Eigen::Map<const Eigen::VectorXd>(y.data(), m));
      ok = ok && r.converged;
      return compare(std::span<const double>(r.x.data(), n), x0).l2_error;
    };
    Cell& c = cells[idx];
    const auto oc = decoder.recover_with_hub_errors(clean);
    const auto on = decoder.recover_with_hub_errors(noisy);
    c.converged = oc.converged() && on.converged();
    c.ours_clean = compare(oc.x, x0).l2_error;
    c.ours_noisy = compare(on.x, x0).l2_error;
    c.l1_clean = whole_error(clean, c.converged);
    c.l1_noisy = whole_error(noisy, c.converged);
    c.grp_clean = compare(decoder.recover(clean).x, x0).l2_error;
    c.grp_noisy = compare(decoder.recover(noisy).x, x0).l2_error;
  });

  ResultTable table;
  table.columns = {"k",          "ours_clean",         "l1_clean",
                   "ours_noisy", "l1_noisy",           "l1_groupwise_clean",
                   "l1_groupwise_noisy", "max_ours_clean", "nonconverged"};
  for (int ki = 0; ki < nk; ++ki) {
    std::vector<double> oc, lc, on, ln, gc, gn;
    double bad = 0;
    for (int t = 0; t < trials; ++t) {
      const auto& c = cells[static_cast<std::size_t>(ki) * trials + t];
      oc.push_back(c.ours_clean);
      lc.push_back(c.l1_clean);
      on.push_back(c.ours_noisy);
      ln.push_back(c.l1_noisy);
      gc.push_back(c.grp_clean);
      gn.push_back(c.grp_noisy);
      bad += c.converged ? 0 : 1;
    }
    const auto s = summarize(oc);
    table.rows.push_back({static_cast<double>(config.sparsities[ki]), s.mean, summarize(lc).mean,
                          summarize(on).mean, summarize(ln).mean, summarize(gc).mean,
                          summarize(gn).mean, s.max, bad});
  }
  return table;
}

ResultTable run_experiment(const ExperimentConfig& config) {
  if (config.experiment == "fig6") return run_fig6(config);
  if (config.experiment == "fig7") return run_fig7(config);
  if (config.experiment == "fig8") return run_fig8(config);
  throw InvalidArgument("unknown experiment '" + config.experiment + "'");
}

}  // namespace gsr
