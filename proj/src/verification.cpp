#include "gsr/verification.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "gsr/exact.hpp"

namespace gsr {

FeasibilityReport check_feasibility(const Graph& g, const MeasurementPlan& plan) {
  if (plan.n != g.n()) {
    throw InvalidArgument("plan has n=" + std::to_string(plan.n) + " but graph has n=" +
                          std::to_string(g.n()));
  }
  for (std::size_t i = 0; i < plan.rows.size(); ++i) {
    const auto& row = plan.rows[i];
    if (row.empty() || !is_connected(g, row)) return {false, static_cast<int>(i)};
  }
  return {};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Unverifiable:
      return "unverifiable";
  }
  return "?";
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= r; ++i) {
    acc = acc * static_cast<unsigned>(n - r + i) / static_cast<unsigned>(i);
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(acc);
}

namespace {

// Advances `c` (strictly increasing, values < n) to the next combination.
bool next_combination(std::vector<int>& c, int n) {
  const int r = static_cast<int>(c.size());
  int i = r - 1;
  while (i >= 0 && c[i] == n - r + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
  return true;
}

std::vector<int> first_combination(int r) {
  std::vector<int> c(r);
  for (int i = 0; i < r; ++i) c[i] = i;
  return c;
}

}  // namespace

IdentifiabilityReport check_identifiability(const DenseMatrix& a, int k, std::uint64_t budget) {
  if (k < 1) throw InvalidArgument("identifiability needs k >= 1");
  IdentifiabilityReport report;
  const int n = a.cols();
  const int s = std::min(2 * k, n);
  if (s == 0) {
    report.verdict = Verdict::Pass;
    return report;
  }
  if (binomial(n, s) > budget) {
    report.verdict = Verdict::Unverifiable;
    return report;
  }
  auto cols = first_combination(s);
  do {
    ++report.subsets_checked;
    if (exact::column_rank(a, cols) < s) {
      report.verdict = Verdict::Fail;
      report.witness_columns = cols;
      report.kernel = exact::kernel_vector(a, cols);
      return report;
    }
  } while (next_combination(cols, n));
  report.verdict = Verdict::Pass;
  return report;
}

IdentifiabilityReport check_identifiability(const MeasurementPlan& plan, int k,
                                            std::uint64_t budget) {
  return check_identifiability(DenseMatrix(plan), k, budget);
}

bool identifiable_by_minors(const DenseMatrix& a, int k) {
  const int n = a.cols();
  const int m = a.rows();
  const int s = std::min(2 * k, n);
  if (s == 0) return true;
  if (m < s) return false;
  auto cols = first_combination(s);
  std::vector<std::vector<int>> minor(s, std::vector<int>(s));
  do {
    bool independent = false;
    auto rows = first_combination(s);
    do {
      for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) minor[i][j] = a(rows[i], cols[j]);
      }
      independent = exact::leibniz_determinant(minor) != 0;
    } while (!independent && next_combination(rows, m));
    if (!independent) return false;
  } while (next_combination(cols, n));
  return true;
}

bool columns_distinct_nonzero(const DenseMatrix& a) {
  std::vector<std::vector<int>> cols(a.cols(), std::vector<int>(a.rows()));
  for (int c = 0; c < a.cols(); ++c) {
    bool nonzero = false;
    for (int r = 0; r < a.rows(); ++r) {
      cols[c][r] = a(r, c);
      nonzero = nonzero || cols[c][r];
    }
    if (!nonzero) return false;
  }
  std::sort(cols.begin(), cols.end());
  return std::adjacent_find(cols.begin(), cols.end()) == cols.end();
}

namespace {

struct CodeSearch {
  int n;
  int m;
  const std::vector<unsigned>& masks;
  std::vector<int> chosen;
  std::vector<unsigned> codes;

  bool leaf_ok() const {
    std::vector<unsigned> c(codes);
    if (std::find(c.begin(), c.end(), 0u) != c.end()) return false;
    std::sort(c.begin(), c.end());
    return std::adjacent_find(c.begin(), c.end()) == c.end();
  }

  bool search(int start, int depth) {
    if (depth == m) return leaf_ok();
    const int total = static_cast<int>(masks.size());
    for (int i = start; i <= total - (m - depth); ++i) {
      chosen.push_back(i);
      for (int v = 0; v < n; ++v) {
        if (masks[i] >> v & 1u) codes[v] |= 1u << depth;
      }
      if (search(i + 1, depth + 1)) return true;
      for (int v = 0; v < n; ++v) codes[v] &= ~(1u << depth);
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

MinMeasurements min_measurements_exhaustive(const Graph& g, int max_m) {
  const int n = g.n();
  if (n < 1 || n > 8) throw InvalidArgument("exhaustive search supports 1 <= n <= 8");
  std::vector<unsigned> feasible;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<NodeId> ids;
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1u) ids.push_back(v);
    }
    if (is_connected(g, NodeSet(std::move(ids)))) feasible.push_back(mask);
  }
  for (int m = 1; m <= max_m; ++m) {
    if (m > static_cast<int>(feasible.size())) break;
    CodeSearch s{n, m, feasible, {}, std::vector<unsigned>(n, 0)};
    if (s.search(0, 0)) {
      MinMeasurements out;
      out.m_min = m;
      for (int idx : s.chosen) {
        std::vector<NodeId> ids;
        for (int v = 0; v < n; ++v) {
          if (feasible[idx] >> v & 1u) ids.push_back(v);
        }
        out.witness_rows.emplace_back(std::move(ids));
      }
      return out;
    }
  }
  throw Infeasible("no identifying measurement set with at most " + std::to_string(max_m) +
                   " rows");
}

std::vector<int> count_endpoints(const MeasurementPlan& plan) {
  std::vector<int> counts(plan.n, 0);
  for (std::size_t i = 0; i < plan.rows.size(); ++i) {
    const auto& row = plan.rows[i];
    if (row.empty()) throw InvalidArgument("row " + std::to_string(i) + " is empty");
    const NodeId first = row[0];
    const NodeId last = row[row.size() - 1];
    if (last - first + 1 != static_cast<int>(row.size())) {
      throw InvalidArgument("row " + std::to_string(i) + " is not an interval");
    }
    ++counts[first];
    ++counts[last];
  }
  return counts;
}

void write_report(std::ostream& out, const IdentifiabilityReport& report) {
  out << "verdict: " << to_string(report.verdict) << '\n';
  out << "subsets_checked: " << report.subsets_checked << '\n';
  if (report.verdict == Verdict::Fail) {
    out << "witness_columns:";
    for (int c : report.witness_columns) out << ' ' << c;
    out << "\nkernel:";
    for (const auto& q : report.kernel) out << ' ' << q.get_str();
    out << '\n';
  }
}

}  // namespace gsr
