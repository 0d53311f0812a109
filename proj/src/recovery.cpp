#include "gsr/recovery.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <cstdint>
#include <random>
#include <ostream>
#include <sstream>

namespace gsr {

// ---------------------------------------------------------------------------
// Basis pursuit

BasisPursuit::BasisPursuit(Eigen::MatrixXd a) : a_(std::move(a)) {
  const Eigen::MatrixXd gram = a_ * a_.transpose();
  if (gram.rows() == 0) {
    gram_pinv_ = gram;
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double cutoff = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff()) * gram.rows();
  Eigen::VectorXd inv = ev.unaryExpr([cutoff](double l) { return l > cutoff ? 1.0 / l : 0.0; });
  gram_pinv_ = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rows(a_.transpose());
  for (Eigen::Index i = 0; i < rows.rank(); ++i) {
    independent_rows_.push_back(static_cast<int>(rows.colsPermutation().indices()[i]));
  }
  std::sort(independent_rows_.begin(), independent_rows_.end());
}

Eigen::VectorXd BasisPursuit::project(const Eigen::VectorXd& v, const Eigen::VectorXd& y) const {
  if (a_.rows() == 0) return v;
  return v - a_.transpose() * (gram_pinv_ * (a_ * v - y));
}

namespace {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t) {
  return v.unaryExpr([t](double a) { return a > t ? a - t : (a < -t ? a + t : 0.0); });
}

double feasibility_tol(double tol, const Eigen::VectorXd& y) {
  return tol * std::max(1.0, y.norm());
}

}  // namespace

bool BasisPursuit::try_polish(const Eigen::VectorXd& z, const Eigen::VectorXd* dual,
                              const Eigen::VectorXd& y, double tol, Eigen::VectorXd& out) const {
  const int n = static_cast<int>(a_.cols());
  const int m = static_cast<int>(a_.rows());
  const double scale = z.cwiseAbs().maxCoeff();
  if (scale <= 0.0) {
    if (y.norm() > feasibility_tol(tol, y)) return false;
    out = Eigen::VectorXd::Zero(n);
    return true;
  }
  std::vector<int> support;
  for (int i = 0; i < n; ++i) {
    if (std::abs(z[i]) > 1e-9 * scale) support.push_back(i);
  }
  Eigen::MatrixXd at;
  Eigen::VectorXd xs;
  // refit until no coefficient collapses to zero
  for (;;) {
    const int s = static_cast<int>(support.size());
    if (s > m) return false;
    at.resize(m, s);
    for (int j = 0; j < s; ++j) at.col(j) = a_.col(support[j]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
    if (qr.rank() < s) return false;
    xs = qr.solve(y);
    const double big = s ? xs.cwiseAbs().maxCoeff() : 0.0;
    std::vector<int> kept;
    for (int j = 0; j < s; ++j) {
      if (std::abs(xs[j]) > 1e-10 * big) kept.push_back(support[j]);
    }
    if (kept.size() == support.size()) break;
    support = std::move(kept);
  }
  const int s = static_cast<int>(support.size());
  if ((at * xs - y).norm() > feasibility_tol(tol, y)) return false;

  // Certificate: lambda with A_T^T lambda = sign(x_T) and |A^T lambda| <= 1.
  // Tried as the least-norm solution, then as the ADMM dual corrected onto
  // the support equations.
  Eigen::VectorXd sign(s);
  for (int j = 0; j < s; ++j) sign[j] = xs[j] > 0 ? 1.0 : -1.0;
  const auto normal = (at.transpose() * at).ldlt();
  auto certifies = [&](const Eigen::VectorXd& lambda) {
    return s == 0 || (a_.transpose() * lambda).cwiseAbs().maxCoeff() <= 1.0 + 1e-9;
  };
  bool ok = certifies(at * normal.solve(sign));
  if (!ok && dual != nullptr) {
    const Eigen::VectorXd lu = gram_pinv_ * (a_ * *dual);
    ok = certifies(lu + at * normal.solve(sign - at.transpose() * lu));
  }
  if (!ok) return false;
  out = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < s; ++j) out[support[j]] = xs[j];
  return true;
}

bool BasisPursuit::simplex_finish(const Eigen::VectorXd& start, const Eigen::VectorXd& y,
                                  double tol, Eigen::VectorXd& out, int& pivots) const {
  // LP: min 1^T t over signed columns sigma_j a_j, t >= 0. Any nonsingular
  // column basis is feasible once each sign follows its basic value.
  const int n = static_cast<int>(a_.cols());
  const int m = static_cast<int>(independent_rows_.size());
  if (m == 0) return false;
  Eigen::MatrixXd a(m, n);
  Eigen::VectorXd yr(m);
  for (int i = 0; i < m; ++i) {
    a.row(i) = a_.row(independent_rows_[i]);
    yr[i] = y[independent_rows_[i]];
  }

  // greedy basis over columns by decreasing |start|
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return std::abs(start[i]) > std::abs(start[j]); });
  Eigen::MatrixXd q(m, m);
  std::vector<int> basis;
  std::vector<char> in_basis(n, 0);
  for (int j : order) {
    if (static_cast<int>(basis.size()) == m) break;
    const int r = static_cast<int>(basis.size());
    Eigen::VectorXd v = a.col(j);
    for (int pass = 0; pass < 2; ++pass) v -= q.leftCols(r) * (q.leftCols(r).transpose() * v);
    const double norm = v.norm();
    if (norm > 1e-9 * std::max(1.0, a.col(j).norm())) {
      q.col(r) = v / norm;
      basis.push_back(j);
      in_basis[j] = 1;
    }
  }
  if (static_cast<int>(basis.size()) < m) return false;

  // A tiny deterministic rhs perturbation breaks the heavy degeneracy of
  // sparse optima; the true rhs is restored for a final cleanup pass.
  std::mt19937_64 gen(0x5eedULL);
  Eigen::VectorXd rhs(m);
  const double scale = 1e-7 * (1.0 + yr.cwiseAbs().maxCoeff());
  for (int i = 0; i < m; ++i) {
    const std::uint64_t bits = gen();
    const double mag = 0.5 + 0.5 * static_cast<double>(bits >> 11) * 0x1.0p-53;
    rhs[i] = yr[i] + scale * mag * ((bits & 1U) ? 1.0 : -1.0);
  }

  Eigen::MatrixXd binv;
  Eigen::VectorXd t(m), sigma = Eigen::VectorXd::Ones(m);
  auto refactor = [&] {
    Eigen::MatrixXd b(m, m);
    for (int i = 0; i < m; ++i) b.col(i) = a.col(basis[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    binv = lu.inverse();
    const Eigen::VectorXd xb = lu.solve(rhs);
    const double eps = 1e-11 * (1.0 + xb.cwiseAbs().maxCoeff());
    for (int i = 0; i < m; ++i) {
      // A zero basic keeps its sign; flipping it would move the dual.
      if (std::abs(xb[i]) <= eps) {
        t[i] = 0.0;
      } else {
        sigma[i] = xb[i] < 0 ? -1.0 : 1.0;
        t[i] = std::abs(xb[i]);
      }
    }
  };

  const int max_pivots = 20 * (m + n);
  auto run = [&]() -> bool {
    refactor();
    for (int since_refactor = 0;; ++since_refactor) {
      if (since_refactor == 200) {
        refactor();
        since_refactor = 0;
      }
      const Eigen::VectorXd lambda = binv.transpose() * sigma;
      const Eigen::VectorXd g = a.transpose() * lambda;
      // entering column: largest |g_j| > 1
      int enter = -1;
      double best = 1.0 + 1e-10;
      for (int j = 0; j < n; ++j) {
        if (in_basis[j] || std::abs(g[j]) <= best) continue;
        enter = j;
        best = std::abs(g[j]);
      }
      if (enter < 0) {
        // Confirm optimality on a fresh factorization before stopping.
        if (since_refactor == 0) return true;
        refactor();
        since_refactor = -1;
        continue;
      }
      if (pivots >= max_pivots) return false;
      ++pivots;
      const double s = g[enter] > 0 ? 1.0 : -1.0;
      const Eigen::VectorXd w = binv * a.col(enter);
      const double wmax = w.cwiseAbs().maxCoeff();
      int leave = -1;
      double theta = 0.0, rate_leave = 0.0;
      for (int i = 0; i < m; ++i) {
        const double rate = s * sigma[i] * w[i];
        if (rate <= 1e-9 * wmax) continue;
        const double th = t[i] / rate;
        if (leave < 0 || th < theta - 1e-12 * std::max(1.0, theta) ||
            (th <= theta + 1e-12 * std::max(1.0, theta) && rate > rate_leave)) {
          leave = i;
          theta = th;
          rate_leave = rate;
        }
      }
      if (leave < 0) return false;
      for (int i = 0; i < m; ++i) t[i] = std::max(0.0, t[i] - theta * s * sigma[i] * w[i]);
      const Eigen::RowVectorXd pivot_row = binv.row(leave) / w[leave];
      binv.noalias() -= w * pivot_row;
      binv.row(leave) = pivot_row;
      in_basis[basis[leave]] = 0;
      basis[leave] = enter;
      in_basis[enter] = 1;
      sigma[leave] = s;
      t[leave] = theta;
    }
  };
  if (!run()) return false;
  rhs = yr;
  if (!run()) return false;

  const Eigen::VectorXd lambda = binv.transpose() * sigma;
  if ((a.transpose() * lambda).cwiseAbs().maxCoeff() > 1.0 + 1e-9) return false;
  out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) out[basis[i]] = sigma[i] * t[i];
  return (a_ * out - y).norm() <= feasibility_tol(tol, y);
}

BpResult BasisPursuit::solve(const Eigen::VectorXd& y, const BpOptions& opts) const {
  if (y.size() != a_.rows()) throw InvalidArgument("basis pursuit: y length does not match A");
  if (opts.tol <= 0.0) throw InvalidArgument("basis pursuit: tol must be positive");
  const int n = static_cast<int>(a_.cols());
  BpResult result;
  auto finish = [&](Eigen::VectorXd x, bool certified, int iterations) {
    result.x = std::move(x);
    result.certified = certified;
    result.converged = result.converged || certified;
    result.iterations = iterations;
    result.residual = (a_ * result.x - y).norm();
    return result;
  };
  if (n == 0) {
    result.converged = y.norm() <= feasibility_tol(opts.tol, y);
    return finish(Eigen::VectorXd::Zero(0), false, 0);
  }

  Eigen::VectorXd x = project(Eigen::VectorXd::Zero(n), y);
  Eigen::VectorXd polished;
  if (try_polish(x, nullptr, y, opts.tol, polished)) return finish(std::move(polished), true, 0);

  // scale rho so the first shrinkage step is comparable to the entries of x
  double rho = opts.rho / std::max(1e-12, x.cwiseAbs().maxCoeff());
  Eigen::VectorXd z = x;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  std::vector<char> pattern(n, 0), last(n, 0);
  int stable = 0;
  int wait = std::max(1, opts.polish_every);

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    x = project(z - u, y);
    const Eigen::VectorXd z_old = z;
    z = soft_threshold(x + u, 1.0 / rho);
    u += x - z;
    const double r = (x - z).norm();
    const double s = rho * (z - z_old).norm();

    for (int i = 0; i < n; ++i) pattern[i] = z[i] > 0 ? 1 : (z[i] < 0 ? 2 : 0);
    stable = pattern == last ? stable + 1 : 0;
    std::swap(pattern, last);
    if (it + 1 == opts.simplex_after &&
        simplex_finish(z, y, opts.tol, polished, result.pivots)) {
      return finish(std::move(polished), true, it + 1);
    }
    if (stable >= wait) {
      const Eigen::VectorXd dual = rho * u;
      if (try_polish(z, &dual, y, opts.tol, polished)) {
        return finish(std::move(polished), true, it + 1);
      }
      stable = 0;
      wait = std::min(2 * wait, 1 << 12);
    }
    const double eps_pri = opts.tol * (sqrt_n + std::max(x.norm(), z.norm()));
    const double eps_dual = opts.tol * (sqrt_n + rho * u.norm());
    if (r <= eps_pri && s <= eps_dual) {
      result.converged = true;
      break;
    }
    if ((it + 1) % 10 == 0) {
      if (r > 10.0 * s) {
        rho *= 2.0;
        u *= 0.5;
      } else if (s > 10.0 * r) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }
  const int iterations = std::min(it + 1, opts.max_iterations);
  const Eigen::VectorXd dual = rho * u;
  if (try_polish(z, &dual, y, opts.tol, polished)) return finish(std::move(polished), true, iterations);
  return finish(project(z, y), false, iterations);
}

BpResult solve_basis_pursuit(const DenseMatrix& a, std::span<const double> y, const BpOptions& opts) {
  if (y.size() != static_cast<std::size_t>(a.rows())) {
    throw InvalidArgument("basis pursuit: y length does not match A");
  }
  const Eigen::VectorXd yv =
      Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  return BasisPursuit(to_eigen(a)).solve(yv, opts);
}

Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Plan decoding

SparseVector SparseVector::from_dense(std::span<const double> x, double threshold) {
  SparseVector v;
  v.n = static_cast<int>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > threshold) v.entries[static_cast<int>(i)] = x[i];
  }
  return v;
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> x(n, 0.0);
  for (auto [i, val] : entries) x[i] = val;
  return x;
}

bool RecoveryResult::converged() const {
  return std::all_of(per_group.begin(), per_group.end(), [](const GroupStatus& g) { return g.converged; });
}

struct PlanDecoder::GroupSolver {
  int group = 0;
  bool direct = false;
  std::optional<int> hub_row;
  std::vector<int> rows;            // non-hub-sum rows of this group
  std::vector<NodeSet> row_hubs;    // hub nodes per row
  std::vector<int> direct_member;   // for direct groups: local member per row
  std::unique_ptr<BasisPursuit> plain;
  std::unique_ptr<BasisPursuit> augmented;
};

PlanDecoder::PlanDecoder(const MeasurementPlan& plan, BpOptions opts) : plan_(&plan), opts_(opts) {
  plan.validate();
  const int ngroups = static_cast<int>(plan.groups.size());
  order_.resize(ngroups);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
    return plan.groups[a].recovery_order < plan.groups[b].recovery_order;
  });

  for (int g = 0; g < ngroups; ++g) {
    auto gs = std::make_unique<GroupSolver>();
    gs->group = g;
    const auto& grp = plan.groups[g];
    gs->hub_row = grp.hub_sum_row;
    for (int r = 0; r < static_cast<int>(plan.rows.size()); ++r) {
      const auto& meta = plan.row_meta[r];
      if (meta.group_id != g || meta.is_hub_sum) continue;
      if (grp.hub_sum_row && meta.hub_nodes != plan.rows[*grp.hub_sum_row]) {
        throw InvalidArgument("row " + std::to_string(r) +
                              ": hub nodes differ from the group's hub-sum row");
      }
      gs->rows.push_back(r);
      gs->row_hubs.push_back(meta.hub_nodes);
    }
    const int members = static_cast<int>(grp.members.size());
    const int nrows = static_cast<int>(gs->rows.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nrows, members);
    for (int i = 0; i < nrows; ++i) {
      const NodeSet w = plan.rows[gs->rows[i]].minus(gs->row_hubs[i]);
      for (NodeId v : w) {
        auto it = std::lower_bound(grp.members.begin(), grp.members.end(), v);
        if (it == grp.members.end() || *it != v) {
          throw InvalidArgument("row " + std::to_string(gs->rows[i]) +
                                " touches nodes outside its group and hub");
        }
        b(i, static_cast<int>(it - grp.members.begin())) = 1.0;
      }
    }
    // direct: one singleton row per member
    if (nrows == members) {
      std::vector<int> which(nrows, -1);
      std::vector<char> seen(members, 0);
      bool direct = true;
      for (int i = 0; i < nrows && direct; ++i) {
        int hit = -1, count = 0;
        for (int j = 0; j < members; ++j) {
          if (b(i, j) != 0.0) {
            hit = j;
            ++count;
          }
        }
        direct = count == 1 && !seen[hit];
        if (direct) {
          seen[hit] = 1;
          which[i] = hit;
        }
      }
      if (direct) {
        gs->direct = true;
        gs->direct_member = std::move(which);
      }
    }
    if (!gs->direct) {
      if (grp.hub_sum_row) {
        Eigen::MatrixXd aug(nrows, members + 1);
        aug.leftCols(members) = b;
        aug.col(members).setConstant(-1.0);
        gs->augmented = std::make_unique<BasisPursuit>(std::move(aug));
      }
      gs->plain = std::make_unique<BasisPursuit>(std::move(b));
    }
    groups_.push_back(std::move(gs));
  }
}

PlanDecoder::~PlanDecoder() = default;
PlanDecoder::PlanDecoder(PlanDecoder&&) noexcept = default;
PlanDecoder& PlanDecoder::operator=(PlanDecoder&&) noexcept = default;

RecoveryResult PlanDecoder::recover(std::span<const double> y) const { return run(y, false); }

RecoveryResult PlanDecoder::recover_with_hub_errors(std::span<const double> y) const {
  return run(y, true);
}

RecoveryResult PlanDecoder::run(std::span<const double> y, bool augmented) const {
  const auto& plan = *plan_;
  if (y.size() != plan.rows.size()) {
    throw InvalidArgument("recover: y has " + std::to_string(y.size()) + " entries but plan has " +
                          std::to_string(plan.rows.size()) + " rows");
  }
  RecoveryResult result;
  result.x.assign(plan.n, 0.0);
  std::vector<char> known(plan.n, 0);
  std::vector<double> row_error(y.size(), 0.0);

  for (int g : order_) {
    const auto& gs = *groups_[g];
    const auto& grp = plan.groups[g];
    const int nrows = static_cast<int>(gs.rows.size());
    Eigen::VectorXd rhs(nrows);
    for (int i = 0; i < nrows; ++i) {
      double hub_sum = 0.0;
      if (gs.hub_row) {
        hub_sum = y[*gs.hub_row];
      } else {
        for (NodeId h : gs.row_hubs[i]) {
          if (!known[h]) {
            throw Infeasible("recovery order violation: group " + std::to_string(g) +
                             " needs node " + std::to_string(h) + " before it is decoded");
          }
          hub_sum += result.x[h];
        }
      }
      rhs[i] = y[gs.rows[i]] - hub_sum;
    }

    GroupStatus status;
    status.group = g;
    if (gs.direct) {
      status.direct = true;
      for (int i = 0; i < nrows; ++i) result.x[grp.members[gs.direct_member[i]]] = rhs[i];
    } else {
      const bool use_aug = augmented && gs.augmented;
      const auto& solver = use_aug ? *gs.augmented : *gs.plain;
      const auto bp = solver.solve(rhs, opts_);
      status.converged = bp.converged;
      status.iterations = bp.iterations;
      for (std::size_t j = 0; j < grp.members.size(); ++j) result.x[grp.members[j]] = bp.x[j];
      if (use_aug) {
        const double e = bp.x[static_cast<Eigen::Index>(grp.members.size())];
        result.hub_error_estimates[*gs.hub_row] = e;
        row_error[*gs.hub_row] = e;
      }
    }
    for (NodeId v : grp.members) known[v] = 1;
    result.per_group.push_back(status);
  }

  const auto fitted = gsr::apply(plan, result.x);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = fitted[i] + row_error[i] - y[i];
    acc += d * d;
  }
  result.residual_l2 = std::sqrt(acc);
  return result;
}

RecoveryResult recover_groupwise(const MeasurementPlan& plan, std::span<const double> y, double tol) {
  BpOptions opts;
  opts.tol = tol;
  return PlanDecoder(plan, opts).recover(y);
}

RecoveryResult recover_with_hub_errors(const MeasurementPlan& plan, std::span<const double> y,
                                       double tol) {
  if (std::none_of(plan.groups.begin(), plan.groups.end(),
                   [](const Group& g) { return g.hub_sum_row.has_value(); })) {
    throw InvalidArgument("hub-error recovery needs a plan with at least one hub-sum row");
  }
  BpOptions opts;
  opts.tol = tol;
  return PlanDecoder(plan, opts).recover_with_hub_errors(y);
}

SparseVector decode_1sparse_binary(const MeasurementPlan& plan, std::span<const double> y) {
  const int n = plan.n;
  const int m = static_cast<int>(plan.rows.size());
  if (y.size() != static_cast<std::size_t>(m)) throw InvalidArgument("decode: y length mismatch");
  // the plan must be the binary-code matrix: row b = {j : bit b of j + 1}
  for (int b = 0; b < m; ++b) {
    std::vector<NodeId> expect;
    for (int j = 0; j < n; ++j) {
      if ((j + 1) >> b & 1) expect.push_back(j);
    }
    if (plan.rows[b].vec() != expect) throw InvalidArgument("decode: plan is not a binary-code plan");
  }
  SparseVector out;
  out.n = n;
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return out;
  const double eps = 1e-9 * scale;
  double value = 0.0;
  unsigned code = 0;
  for (int b = 0; b < m; ++b) {
    if (std::abs(y[b]) <= eps) continue;
    if (code != 0 && std::abs(y[b] - value) > eps) {
      throw Infeasible("decode: measurements disagree, not a 1-sparse signal");
    }
    value = y[b];
    code |= 1u << b;
  }
  const int node = static_cast<int>(code) - 1;
  if (node >= n) throw Infeasible("decode: bit pattern names no node");
  out.entries[node] = value;
  return out;
}

Comparison compare(std::span<const double> recovered, std::span<const double> truth) {
  if (recovered.size() != truth.size()) throw InvalidArgument("compare: dimension mismatch");
  Comparison c;
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = recovered[i] - truth[i];
    acc += d * d;
    if ((std::abs(recovered[i]) > 1e-8) != (std::abs(truth[i]) > 1e-8)) c.support_match = false;
  }
  c.l2_error = std::sqrt(acc);
  return c;
}

// ---------------------------------------------------------------------------
// Text I/O

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) throw FormatError("empty number");
  double v = 0.0;
  const char* first = s.data() + b;
  const char* last = s.data() + e + 1;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw FormatError("bad number '" + s + "'");
  return v;
}

void write_sparse_csv(std::ostream& out, const SparseVector& v) {
  out << "index,value\n";
  for (auto [i, val] : v.entries) out << i << ',' << format_double(val) << '\n';
}

SparseVector read_sparse_csv(std::istream& in, int n) {
  SparseVector v;
  v.n = n;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "index,value") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError("sparse CSV: expected 'index,value'");
    const double idx = parse_double(line.substr(0, comma));
    const int i = static_cast<int>(idx);
    if (i != idx || i < 0 || i >= n) throw FormatError("sparse CSV: bad index in '" + line + "'");
    v.entries[i] = parse_double(line.substr(comma + 1));
  }
  return v;
}

void write_dense_csv(std::ostream& out, std::span<const double> x) {
  for (double v : x) out << format_double(v) << '\n';
}

std::vector<double> read_dense_csv(std::istream& in) {
  std::vector<double> x;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    x.push_back(parse_double(line));
  }
  return x;
}

void write_recovery(std::ostream& out, const RecoveryResult& r) {
  out << "residual_l2: " << format_double(r.residual_l2) << '\n';
  out << "converged: " << (r.converged() ? "true" : "false") << '\n';
  for (const auto& g : r.per_group) {
    out << "group " << g.group << ": " << (g.direct ? "direct" : "l1")
        << " converged=" << (g.converged ? "true" : "false") << " iterations=" << g.iterations
        << '\n';
  }
  for (auto [row, e] : r.hub_error_estimates) {
    out << "hub_error row=" << row << " estimate=" << format_double(e) << '\n';
  }
  out << "x:\n";
  write_dense_csv(out, r.x);
}

}  // namespace gsr
