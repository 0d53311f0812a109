#include "gsr/plan.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace gsr {

using nlohmann::json;

void MeasurementPlan::append(const MeasurementPlan& other) {
  if (other.n != n) throw InvalidArgument("cannot append plans over different node counts");
  const int row_offset = static_cast<int>(rows.size());
  const int group_offset = static_cast<int>(groups.size());
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  for (RowMeta meta : other.row_meta) {
    meta.group_id += group_offset;
    row_meta.push_back(std::move(meta));
  }
  for (Group g : other.groups) {
    if (g.hub_sum_row) *g.hub_sum_row += row_offset;
    groups.push_back(std::move(g));
  }
  verified = verified && other.verified;
}

void MeasurementPlan::add_direct_group(const NodeSet& members, int recovery_order) {
  if (members.empty()) return;
  const int gid = static_cast<int>(groups.size());
  for (NodeId v : members) {
    rows.push_back(NodeSet{v});
    row_meta.push_back(RowMeta{gid, false, {}});
  }
  groups.push_back(Group{members, std::nullopt, recovery_order});
}

void MeasurementPlan::validate() const {
  if (rows.size() != row_meta.size()) throw InvalidArgument("row_meta size mismatch");
  const int m = static_cast<int>(rows.size());
  for (int i = 0; i < m; ++i) {
    if (rows[i].empty()) throw InvalidArgument("row " + std::to_string(i) + " is empty");
    rows[i].check_range(n);
    const auto& meta = row_meta[i];
    if (meta.group_id < 0 || meta.group_id >= static_cast<int>(groups.size())) {
      throw InvalidArgument("row " + std::to_string(i) + " has invalid group id");
    }
    if (!meta.hub_nodes.disjoint(groups[meta.group_id].members)) {
      throw InvalidArgument("row " + std::to_string(i) + " lists group members as hub nodes");
    }
  }
  std::vector<char> covered(n, 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& grp = groups[g];
    grp.members.check_range(n);
    for (NodeId v : grp.members) {
      if (covered[v]) throw InvalidArgument("groups overlap at node " + std::to_string(v));
      covered[v] = 1;
    }
    if (grp.hub_sum_row) {
      const int r = *grp.hub_sum_row;
      if (r < 0 || r >= m || !row_meta[r].is_hub_sum ||
          row_meta[r].group_id != static_cast<int>(g)) {
        throw InvalidArgument("group " + std::to_string(g) + " has an invalid hub-sum row");
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!covered[v]) throw InvalidArgument("node " + std::to_string(v) + " belongs to no group");
  }
}

DenseMatrix::DenseMatrix(const MeasurementPlan& plan)
    : DenseMatrix(static_cast<int>(plan.rows.size()), plan.n) {
  for (int r = 0; r < rows_; ++r) {
    for (NodeId c : plan.rows[r]) set(r, c, 1);
  }
}

std::vector<double> apply(const MeasurementPlan& plan, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(plan.n)) {
    throw InvalidArgument("apply: vector length " + std::to_string(x.size()) +
                          " does not match n=" + std::to_string(plan.n));
  }
  std::vector<double> y;
  y.reserve(plan.rows.size());
  for (const auto& row : plan.rows) {
    double s = 0.0;
    for (NodeId j : row) s += x[j];
    y.push_back(s);
  }
  return y;
}

std::vector<double> apply_noisy(const MeasurementPlan& plan, std::span<const double> x,
                                std::span<const double> noise) {
  if (noise.size() != plan.rows.size()) throw InvalidArgument("apply_noisy: noise length mismatch");
  auto y = apply(plan, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += noise[i];
  return y;
}

// ---------------------------------------------------------------------------
// Serialization

std::string plan_to_json(const MeasurementPlan& plan) {
  json j;
  j["n"] = plan.n;
  j["k"] = plan.k;
  j["method"] = plan.method;
  j["verified"] = plan.verified;
  json rows = json::array();
  for (const auto& r : plan.rows) rows.push_back(r.vec());
  j["rows"] = std::move(rows);
  json meta = json::array();
  for (const auto& m : plan.row_meta) {
    meta.push_back({{"group_id", m.group_id},
                    {"is_hub_sum", m.is_hub_sum},
                    {"hub_nodes", m.hub_nodes.vec()}});
  }
  j["row_meta"] = std::move(meta);
  json groups = json::array();
  for (const auto& g : plan.groups) {
    json jg{{"members", g.members.vec()}, {"recovery_order", g.recovery_order}};
    jg["hub_sum_row"] = g.hub_sum_row ? json(*g.hub_sum_row) : json(nullptr);
    groups.push_back(std::move(jg));
  }
  j["groups"] = std::move(groups);
  return j.dump(1) + "\n";
}

MeasurementPlan plan_from_json(const std::string& text) {
  MeasurementPlan plan;
  try {
    const json j = json::parse(text);
    plan.n = j.at("n").get<int>();
    plan.k = j.at("k").get<int>();
    plan.method = j.at("method").get<std::string>();
    plan.verified = j.value("verified", true);
    for (const auto& r : j.at("rows")) plan.rows.emplace_back(r.get<std::vector<NodeId>>());
    for (const auto& m : j.at("row_meta")) {
      plan.row_meta.push_back(RowMeta{m.at("group_id").get<int>(), m.at("is_hub_sum").get<bool>(),
                                      NodeSet(m.at("hub_nodes").get<std::vector<NodeId>>())});
    }
    for (const auto& g : j.at("groups")) {
      Group grp;
      grp.members = NodeSet(g.at("members").get<std::vector<NodeId>>());
      grp.recovery_order = g.at("recovery_order").get<int>();
      if (!g.at("hub_sum_row").is_null()) grp.hub_sum_row = g.at("hub_sum_row").get<int>();
      plan.groups.push_back(std::move(grp));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("plan file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("plan file: ") + e.what());
  }
  try {
    plan.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("plan file: ") + e.what());
  }
  return plan;
}

void save_plan(const std::string& path, const MeasurementPlan& plan) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << plan_to_json(plan);
  if (!out) throw IoError("write failed: " + path);
}

MeasurementPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return plan_from_json(buf.str());
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
}

DenseMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<int>> cells;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<int> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      if (cell != "0" && cell != "1") throw FormatError("matrix CSV: entries must be 0 or 1");
      row.push_back(cell[0] - '0');
    }
    if (!cells.empty() && row.size() != cells.front().size()) {
      throw FormatError("matrix CSV: ragged rows");
    }
    cells.push_back(std::move(row));
  }
  const int rows = static_cast<int>(cells.size());
  const int cols = rows ? static_cast<int>(cells.front().size()) : 0;
  DenseMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m.set(r, c, cells[r][c]);
  }
  return m;
}

}  // namespace gsr
