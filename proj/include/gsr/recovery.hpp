#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsr/plan.hpp"

namespace gsr {

struct SparseVector {
  int n = 0;
  std::map<int, double> entries;

  static SparseVector from_dense(std::span<const double> x, double threshold = 0.0);
  [[nodiscard]] std::vector<double> to_dense() const;
  [[nodiscard]] std::size_t support_size() const { return entries.size(); }
};

struct BpOptions {
  double tol = 1e-9;
  int max_iterations = 100000;
  /// ADMM penalty; adapted by residual balancing.
  double rho = 1.0;
  /// Support-polish and optimality-certificate attempt once the support has
  /// been stable this many iterations (the wait doubles after each failure).
  int polish_every = 10;
  /// ADMM iterations before switching to the exact simplex finisher
  /// (0 disables it).
  int simplex_after = 300;
};

struct BpResult {
  Eigen::VectorXd x;
  bool converged = false;
  /// The returned point passed the KKT check (exact-support least squares
  /// plus a dual vector with |A^T lambda| <= 1).
  bool certified = false;
  int iterations = 0;
  /// Simplex pivots spent by the finisher.
  int pivots = 0;
  double residual = 0.0;
};

/// Equality-constrained l1 minimisation, min |x|_1 s.t. A x = y.
///
/// ADMM with an exact projection onto {A x = y} (pseudo-inverse of A A^T,
/// so rank-deficient A is accepted). Whenever the support has been stable
/// for a while it is refit by least squares and accepted if it is feasible
/// and certified optimal. After `simplex_after` iterations the ADMM point
/// seeds a revised simplex on the split LP, which ends at a certified
/// vertex. Failing both, it stops when the primal and dual residuals drop
/// below tol, or flags non-convergence at max_iterations.
class BasisPursuit {
 public:
  explicit BasisPursuit(Eigen::MatrixXd a);
  [[nodiscard]] BpResult solve(const Eigen::VectorXd& y, const BpOptions& opts = {}) const;
  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return a_; }

 private:
  [[nodiscard]] Eigen::VectorXd project(const Eigen::VectorXd& v, const Eigen::VectorXd& y) const;
  /// Least squares on the support of z, accepted if feasible and certified.
  /// `dual` (optional) is an approximate subgradient in range(A^T) used to
  /// build the certificate when the least-norm one fails.
  bool try_polish(const Eigen::VectorXd& z, const Eigen::VectorXd* dual, const Eigen::VectorXd& y,
                  double tol, Eigen::VectorXd& out) const;
  /// Primal simplex from the basis of the largest entries of `start`.
  bool simplex_finish(const Eigen::VectorXd& start, const Eigen::VectorXd& y, double tol,
                      Eigen::VectorXd& out, int& pivots) const;

  Eigen::MatrixXd a_;
  std::vector<int> independent_rows_;  // a basis of the row space of A
  Eigen::MatrixXd gram_pinv_;  // (A A^T)^+
};

Eigen::MatrixXd to_eigen(const DenseMatrix& a);

BpResult solve_basis_pursuit(const DenseMatrix& a, std::span<const double> y,
                             const BpOptions& opts = {});

struct GroupStatus {
  int group = 0;
  bool direct = false;
  bool converged = true;
  int iterations = 0;
};

struct RecoveryResult {
  std::vector<double> x;
  /// Hub-sum row index -> estimated additive error on that measurement.
  std::map<int, double> hub_error_estimates;
  double residual_l2 = 0.0;
  std::vector<GroupStatus> per_group;

  [[nodiscard]] bool converged() const;
};

/// Decodes a plan group by group, caching one solver per group so many
/// measurement vectors can be decoded against the same plan.
class PlanDecoder {
 public:
  explicit PlanDecoder(const MeasurementPlan& plan, BpOptions opts = {});
  ~PlanDecoder();
  PlanDecoder(PlanDecoder&&) noexcept;
  PlanDecoder& operator=(PlanDecoder&&) noexcept;

  /// Hub sums are subtracted using the hub-sum row, or the values decoded for
  /// earlier groups when the group has none.
  [[nodiscard]] RecoveryResult recover(std::span<const double> y) const;
  /// As recover(), but every group with a hub-sum row gets one extra unknown
  /// for the error on that row, solved jointly by l1 minimisation.
  [[nodiscard]] RecoveryResult recover_with_hub_errors(std::span<const double> y) const;

 private:
  struct GroupSolver;
  [[nodiscard]] RecoveryResult run(std::span<const double> y, bool augmented) const;

  const MeasurementPlan* plan_;
  BpOptions opts_;
  std::vector<int> order_;
  std::vector<std::unique_ptr<GroupSolver>> groups_;
};

RecoveryResult recover_groupwise(const MeasurementPlan& plan, std::span<const double> y,
                                 double tol = 1e-9);
RecoveryResult recover_with_hub_errors(const MeasurementPlan& plan, std::span<const double> y,
                                       double tol = 1e-9);

/// Reads node and value off a binary-code (k = 1 complete) plan.
/// Throws Infeasible if y matches no vector with at most one nonzero.
SparseVector decode_1sparse_binary(const MeasurementPlan& plan, std::span<const double> y);

struct Comparison {
  double l2_error = 0.0;
  bool support_match = true;
};

/// Support compared with threshold 1e-8.
Comparison compare(std::span<const double> recovered, std::span<const double> truth);

// Vector files: sparse "index,value" lines; dense one value per line.
void write_sparse_csv(std::ostream& out, const SparseVector& v);
SparseVector read_sparse_csv(std::istream& in, int n);
void write_dense_csv(std::ostream& out, std::span<const double> x);
std::vector<double> read_dense_csv(std::istream& in);

/// Text report with per-group status and hub error estimates.
void write_recovery(std::ostream& out, const RecoveryResult& r);

/// Shortest decimal that round-trips, independent of locale.
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace gsr
