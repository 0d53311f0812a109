#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gsr/graph.hpp"
#include "gsr/plan.hpp"

namespace gsr {

struct FeasibilityReport {
  bool feasible = true;
  std::optional<int> offending_row;

  explicit operator bool() const { return feasible; }
};

/// Every row must induce a connected subgraph of `g`.
FeasibilityReport check_feasibility(const Graph& g, const MeasurementPlan& plan);

enum class Verdict { Pass, Fail, Unverifiable };

const char* to_string(Verdict v);

struct IdentifiabilityReport {
  Verdict verdict = Verdict::Unverifiable;
  /// Lexicographically smallest dependent column subset (on Fail).
  std::vector<int> witness_columns;
  /// Nonzero z over witness_columns with A z = 0 exactly (on Fail).
  std::vector<mpq_class> kernel;
  std::uint64_t subsets_checked = 0;
};

/// Default number of column subsets an identifiability check may examine.
/// Covers n <= 32 at k = 2 and n <= 20 at k = 3.
inline constexpr std::uint64_t kDefaultSubsetBudget = 60000;

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(int n, int r);

/// Every min(2k, n) columns of `a` are linearly independent, decided in
/// exact integer arithmetic. Returns Unverifiable (without checking) when the
/// number of subsets exceeds `budget`.
IdentifiabilityReport check_identifiability(const DenseMatrix& a, int k,
                                            std::uint64_t budget = kDefaultSubsetBudget);
IdentifiabilityReport check_identifiability(const MeasurementPlan& plan, int k,
                                            std::uint64_t budget = kDefaultSubsetBudget);

/// Second, independent test of the same property: a column subset is
/// independent iff one of its maximal square minors is nonzero, evaluated by
/// permutation expansion. Intended for tiny matrices only.
bool identifiable_by_minors(const DenseMatrix& a, int k);

/// k = 1 criterion: columns pairwise distinct and nonzero.
bool columns_distinct_nonzero(const DenseMatrix& a);

struct MinMeasurements {
  int m_min = 0;
  std::vector<NodeSet> witness_rows;
};

/// Smallest number of feasible rows identifying all 1-sparse vectors on `g`,
/// by exhaustive search over connected node subsets. Requires n <= 8.
/// Throws Infeasible if no set of at most `max_m` rows works.
MinMeasurements min_measurements_exhaustive(const Graph& g, int max_m);

/// Per-node count of rows starting or ending at that node; a singleton row
/// counts its node twice. Rows must be contiguous id intervals.
std::vector<int> count_endpoints(const MeasurementPlan& plan);

/// Text report: verdict, subsets checked, witness columns, kernel as fractions.
void write_report(std::ostream& out, const IdentifiabilityReport& report);

}  // namespace gsr
