#include "gsr/exact.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>

namespace gsr::exact {

namespace {

struct Overflow {};

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
  return r;
}

inline mpz_class mul(const mpz_class& a, const mpz_class& b) { return a * b; }
inline mpz_class sub(const mpz_class& a, const mpz_class& b) { return a - b; }

// Bareiss elimination on a row-major rows x cols matrix. Every stored entry
// stays a minor of the input, so each division is exact.
template <typename Int>
int bareiss_rank(std::vector<Int> m, int rows, int cols) {
  auto at = [&](int r, int c) -> Int& { return m[std::size_t(r) * cols + c]; };
  Int prev = 1;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (at(r, c) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int j = 0; j < cols; ++j) std::swap(at(pivot, j), at(rank, j));
    }
    const Int p = at(rank, c);
    for (int r = rank + 1; r < rows; ++r) {
      const Int f = at(r, c);
      for (int j = c + 1; j < cols; ++j) {
        at(r, j) = sub(mul(p, at(r, j)), mul(f, at(rank, j))) / prev;
      }
      at(r, c) = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

}  // namespace

int column_rank(const DenseMatrix& a, std::span<const int> cols) {
  const int rows = a.rows();
  const int w = static_cast<int>(cols.size());
  if (rows == 0 || w == 0) return 0;
  std::vector<std::int64_t> m(std::size_t(rows) * w);
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < w; ++j) m[std::size_t(r) * w + j] = a(r, cols[j]);
  }
  try {
    return bareiss_rank<std::int64_t>(m, rows, w);
  } catch (const Overflow&) {
    std::vector<mpz_class> big(m.begin(), m.end());
    return bareiss_rank<mpz_class>(std::move(big), rows, w);
  }
}

std::vector<mpq_class> kernel_vector(const DenseMatrix& a, std::span<const int> cols) {
  const int rows = a.rows();
  const int w = static_cast<int>(cols.size());
  std::vector<std::vector<mpq_class>> m(rows, std::vector<mpq_class>(w));
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < w; ++j) m[r][j] = a(r, cols[j]);
  }
  std::vector<int> pivot_col_of_row;
  std::vector<char> is_pivot(w, 0);
  int rank = 0;
  for (int c = 0; c < w && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[pivot], m[rank]);
    const mpq_class p = m[rank][c];
    for (int j = c; j < w; ++j) m[rank][j] /= p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const mpq_class f = m[r][c];
      for (int j = c; j < w; ++j) m[r][j] -= f * m[rank][j];
    }
    pivot_col_of_row.push_back(c);
    is_pivot[c] = 1;
    ++rank;
  }
  if (rank == w) return {};
  // first free column gets 1; pivots solve for it
  const int free_col = static_cast<int>(std::find(is_pivot.begin(), is_pivot.end(), 0) - is_pivot.begin());
  std::vector<mpq_class> z(w, 0);
  z[free_col] = 1;
  for (int r = 0; r < rank; ++r) z[pivot_col_of_row[r]] = -m[r][free_col];
  return z;
}

mpz_class leibniz_determinant(const std::vector<std::vector<int>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  mpz_class det = 0;
  do {
    // sign from inversion count
    int inversions = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    long term = 1;
    for (int i = 0; i < n && term != 0; ++i) term *= m[i][perm[i]];
    det += (inversions % 2 ? -term : term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace gsr::exact
