#pragma once

#include <span>
#include <vector>

#include <gmpxx.h>

#include "gsr/plan.hpp"

namespace gsr::exact {

/// Rank of the submatrix formed by `cols`, via fraction-free (Bareiss)
/// elimination. Runs in checked 64-bit arithmetic and reruns with GMP
/// integers if an intermediate value would overflow.
int column_rank(const DenseMatrix& a, std::span<const int> cols);

/// A nonzero vector z over `cols` with A_cols z = 0, or empty if the
/// columns are independent. Computed by rational reduced row echelon form.
std::vector<mpq_class> kernel_vector(const DenseMatrix& a, std::span<const int> cols);

/// Determinant by permutation expansion. Only for small square matrices.
mpz_class leibniz_determinant(const std::vector<std::vector<int>>& m);

}  // namespace gsr::exact
