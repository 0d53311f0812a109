#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "gsr/constructions.hpp"
#include "gsr/exact.hpp"
#include "gsr/random.hpp"
#include "gsr/verification.hpp"

using namespace gsr;

namespace {

DenseMatrix from_rows(const std::vector<std::vector<int>>& rows) {
  DenseMatrix a(int(rows.size()), int(rows[0].size()));
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) a.set(r, c, rows[r][c]);
  return a;
}

DenseMatrix random_matrix(Rng& rng, int m, int n) {
  DenseMatrix a(m, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) a.set(r, c, coin(rng) ? 1 : 0);
  return a;
}

// Rank over the rationals by plain elimination, independent of the library.
int rank_oracle(const DenseMatrix& a, const std::vector<int>& cols) {
  std::vector<std::vector<mpq_class>> m(a.rows(), std::vector<mpq_class>(cols.size()));
  for (int r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) m[r][c] = a(r, cols[c]);
  int rank = 0;
  for (std::size_t c = 0; c < cols.size() && rank < a.rows(); ++c) {
    int piv = -1;
    for (int r = rank; r < a.rows(); ++r)
      if (m[r][c] != 0) piv = r;
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    for (int r = 0; r < a.rows(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      mpq_class f = m[r][c] / m[rank][c];
      for (std::size_t j = 0; j < cols.size(); ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

bool subsets_independent_oracle(const DenseMatrix& a, int k) {
  const int n = a.cols();
  const int s = std::min(2 * k, n);
  std::vector<int> cols(s);
  for (int i = 0; i < s; ++i) cols[i] = i;
  while (true) {
    if (rank_oracle(a, cols) < s) return false;
    int i = s - 1;
    while (i >= 0 && cols[i] == n - s + i) --i;
    if (i < 0) return true;
    ++cols[i];
    for (int j = i + 1; j < s; ++j) cols[j] = cols[j - 1] + 1;
  }
}

}  // namespace

TEST_CASE("column rank") {
  DenseMatrix a = from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  std::vector<int> all{0, 1, 2};
  CHECK(exact::column_rank(a, all) == 3);
  DenseMatrix b = from_rows({{1, 1, 0}, {0, 1, 1}, {1, 2, 1}});
  CHECK(exact::column_rank(b, all) == 2);
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    DenseMatrix m = random_matrix(rng, 1 + int(uniform_below(rng, 8)), 1 + int(uniform_below(rng, 8)));
    std::vector<int> cols;
    for (int c = 0; c < m.cols(); ++c) cols.push_back(c);
    CHECK(exact::column_rank(m, cols) == rank_oracle(m, cols));
  }
}

TEST_CASE("rank survives int64 overflow") {
  // Large dense 0-1 matrices push Bareiss pivots past 64 bits.
  Rng rng(9);
  DenseMatrix m = random_matrix(rng, 60, 60);
  std::vector<int> cols;
  for (int c = 0; c < 60; ++c) cols.push_back(c);
  CHECK(exact::column_rank(m, cols) == rank_oracle(m, cols));
}

TEST_CASE("kernel vector") {
  DenseMatrix b = from_rows({{1, 1, 0}, {0, 1, 1}, {1, 2, 1}});
  std::vector<int> all{0, 1, 2};
  auto z = exact::kernel_vector(b, all);
  REQUIRE(z.size() == 3);
  for (int r = 0; r < 3; ++r) {
    mpq_class s = 0;
    for (int c = 0; c < 3; ++c) s += b(r, c) * z[c];
    CHECK(s == 0);
  }
  DenseMatrix id = from_rows({{1, 0}, {0, 1}});
  std::vector<int> two{0, 1};
  CHECK(exact::kernel_vector(id, two).empty());
}

TEST_CASE("leibniz determinant") {
  CHECK(exact::leibniz_determinant({{1, 2}, {3, 4}}) == -2);
  CHECK(exact::leibniz_determinant({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}) == 2);
  CHECK(exact::leibniz_determinant({{1, 1}, {1, 1}}) == 0);
}

TEST_CASE("feasibility") {
  MeasurementPlan p;
  p.n = 4;
  p.rows = {NodeSet{0, 2}};
  p.row_meta.resize(1);
  p.groups = {Group{NodeSet{0, 1, 2, 3}, std::nullopt, 0}};
  FeasibilityReport r = check_feasibility(gen_line(4), p);
  CHECK_FALSE(r.feasible);
  CHECK(r.offending_row == 0);

  MeasurementPlan direct;
  direct.n = 6;
  direct.add_direct_group(NodeSet{0, 1, 2, 3, 4, 5}, 0);
  CHECK(check_feasibility(Graph(6, std::vector<Edge>{}), direct).feasible);
  CHECK(check_feasibility(gen_line(12), construct_line_k(12, 2)).feasible);
}

TEST_CASE("identifiability") {
  CHECK(check_identifiability(construct_line_k(12, 2), 2).verdict == Verdict::Pass);
  DenseMatrix id = from_rows({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0},
                              {0, 0, 0, 0, 1}});
  CHECK(check_identifiability(id, 2).verdict == Verdict::Pass);

  DenseMatrix dup = from_rows({{1, 0, 1}, {0, 1, 0}});
  IdentifiabilityReport rep = check_identifiability(dup, 1);
  CHECK(rep.verdict == Verdict::Fail);
  CHECK(rep.witness_columns == std::vector<int>{0, 2});
  REQUIRE(rep.kernel.size() == 2);
  CHECK(rep.kernel[0] == -rep.kernel[1]);
  CHECK(rep.kernel[0] != 0);

  std::ostringstream out;
  write_report(out, rep);
  CHECK(out.str().find("fail") != std::string::npos);

  DenseMatrix wide(10, 200);
  CHECK(check_identifiability(wide, 3, 1000).verdict == Verdict::Unverifiable);
}

TEST_CASE("binomial saturates") {
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(200, 100) == UINT64_MAX);
}

TEST_CASE("three oracles agree on random matrices") {
  Rng rng(2024);
  int disagreements = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + int(uniform_below(rng, 7));
    const int m = 1 + int(uniform_below(rng, 6));
    const int k = 1 + int(uniform_below(rng, 2));
    DenseMatrix a = random_matrix(rng, m, n);
    const bool lib = check_identifiability(a, k).verdict == Verdict::Pass;
    disagreements += lib != identifiable_by_minors(a, k);
    disagreements += lib != subsets_independent_oracle(a, k);
  }
  CHECK(disagreements == 0);
}

TEST_CASE("failure witnesses are genuine") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    DenseMatrix a = random_matrix(rng, 3, 7);
    IdentifiabilityReport rep = check_identifiability(a, 1);
    if (rep.verdict != Verdict::Fail) continue;
    for (int r = 0; r < a.rows(); ++r) {
      mpq_class s = 0;
      for (std::size_t i = 0; i < rep.witness_columns.size(); ++i)
        s += a(r, rep.witness_columns[i]) * rep.kernel[i];
      CHECK(s == 0);
    }
  }
}

TEST_CASE("k = 1 criterion") {
  CHECK(columns_distinct_nonzero(from_rows({{1, 0, 1}, {0, 1, 1}})));
  CHECK_FALSE(columns_distinct_nonzero(from_rows({{1, 0, 1}, {0, 0, 0}})));
  CHECK_FALSE(columns_distinct_nonzero(from_rows({{1, 1, 0}, {0, 0, 1}})));
}

TEST_CASE("exhaustive minimum measurements") {
  CHECK(min_measurements_exhaustive(gen_line(5), 6).m_min == 3);
  CHECK(min_measurements_exhaustive(gen_ring(6), 6).m_min == 3);
  MinMeasurements k4 = min_measurements_exhaustive(gen_complete(4), 6);
  CHECK(k4.m_min == 3);
  MeasurementPlan w;
  w.n = 4;
  w.rows = k4.witness_rows;
  w.row_meta.resize(w.rows.size());
  w.groups = {Group{NodeSet{0, 1, 2, 3}, std::nullopt, 0}};
  CHECK(columns_distinct_nonzero(DenseMatrix(w)));
  CHECK_THROWS_AS(min_measurements_exhaustive(gen_line(5), 2), Infeasible);
}

TEST_CASE("endpoint counts") {
  MeasurementPlan p;
  p.n = 2;
  p.rows = {NodeSet{0}, NodeSet{0, 1}};
  p.row_meta.resize(2);
  p.groups = {Group{NodeSet{0, 1}, std::nullopt, 0}};
  CHECK(count_endpoints(p) == std::vector<int>{3, 1});

  MeasurementPlan lk = construct_line_k(12, 2);
  int total = 0;
  for (int c : count_endpoints(lk)) total += c;
  CHECK(total == 2 * int(lk.row_count()));

  MeasurementPlan direct;
  direct.n = 5;
  direct.add_direct_group(NodeSet{0, 1, 2, 3, 4}, 0);
  CHECK(count_endpoints(direct) == std::vector<int>(5, 2));
}
