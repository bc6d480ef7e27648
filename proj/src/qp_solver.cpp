#include "lcqp/qp_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace lcqp {

namespace {

// L L' += v v' for a lower-triangular factor L (LINPACK-style sweep of
// Givens-like eliminations). Used when a working-set row is deleted: the
// trailing block of the factor absorbs the removed column as a rank-one term.
void chol_rank1_update(Eigen::Ref<Matrix> L, Vector v) {
  const int m = static_cast<int>(L.rows());
  for (int k = 0; k < m; ++k) {
    const double lkk = L(k, k);
    const double r = std::hypot(lkk, v[k]);
    const double c = r / lkk;
    const double s = v[k] / lkk;
    L(k, k) = r;
    const int t = m - k - 1;
    if (t > 0) {
      auto col = L.col(k).segment(k + 1, t);
      auto vt = v.segment(k + 1, t);
      col = (col + s * vt) / c;
      vt = c * vt - s * col;
    }
  }
}

}  // namespace

QpWorkspace::QpWorkspace(const Matrix& Q, StackedConstraints stacked,
                         QpOptions opt)
    : n_(static_cast<int>(Q.rows())),
      m_rows_(stacked.total_rows()),
      opt_(opt),
      Q_(Q),
      stacked_(std::move(stacked)) {
  if (Q_.rows() != Q_.cols() || n_ == 0 || stacked_.rows.cols() != n_)
    throw std::invalid_argument("workspace dimensions inconsistent");
  qchol_.compute(Q_);
  if (qchol_.info() != Eigen::Success)
    throw std::invalid_argument("Hessian not positive definite");
  row_scale_.resize(m_rows_);
  for (int r = 0; r < m_rows_; ++r)
    row_scale_[r] = std::max(1.0, stacked_.rows.row(r).cwiseAbs().maxCoeff());
  N_.resize(n_, n_);
  QiN_.resize(n_, n_);
  Ls_.resize(n_, n_);
  bw_.resize(n_);
  in_ws_.assign(m_rows_, 0);
  x_.setZero(n_);
}

void QpWorkspace::set_start(const Vector& x) {
  if (x.size() != n_) throw std::invalid_argument("start has wrong dimension");
  if (stacked_.max_violation(x) > 1e-6)
    throw std::invalid_argument("start violates the stacked rows");
  x_ = x;
  ws_.clear();
  in_ws_.assign(m_rows_, 0);
  started_ = true;
}

bool QpWorkspace::grow(int row, int side) {
  const int m = working_set_size();
  if (m >= n_) return false;  // any further row is dependent
  const Vector w = side * stacked_.rows.row(row).transpose();
  const Vector d = qchol_.solve(w);
  const double s22 = w.dot(d);
  double l22sq = s22;
  Vector l12;
  if (m > 0) {
    const Vector s12 = N_.leftCols(m).transpose() * d;
    l12 = Ls_.topLeftCorner(m, m)
              .triangularView<Eigen::Lower>()
              .solve(s12);
    l22sq = s22 - l12.squaredNorm();
  }
  if (!(l22sq > 1e-12 * std::max(s22, kEps))) return false;  // dependent row
  N_.col(m) = w;
  QiN_.col(m) = d;
  if (m > 0) Ls_.row(m).head(m) = l12.transpose();
  Ls_(m, m) = std::sqrt(l22sq);
  bw_[m] = side > 0 ? stacked_.lower[row] : -stacked_.upper[row];
  ws_.push_back({row, side, stacked_.lower[row] == stacked_.upper[row]});
  in_ws_[row] = 1;
  return true;
}

void QpWorkspace::drop(int idx) {
  const int m = working_set_size();
  const int t = m - idx - 1;
  in_ws_[ws_[idx].row] = 0;
  ws_.erase(ws_.begin() + idx);
  for (int j = idx; j < m - 1; ++j) {
    N_.col(j) = N_.col(j + 1);
    QiN_.col(j) = QiN_.col(j + 1);
    bw_[j] = bw_[j + 1];
  }
  if (t > 0) {
    const Vector v = Ls_.col(idx).segment(idx + 1, t);
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < idx; ++j) Ls_(idx + i, j) = Ls_(idx + 1 + i, j);
      for (int j = 0; j <= i; ++j)
        Ls_(idx + i, idx + j) = Ls_(idx + 1 + i, idx + 1 + j);
    }
    chol_rank1_update(Ls_.block(idx, idx, t, t), v);
  }
}

void QpWorkspace::kkt_base(const Vector& a, const Vector& b, Vector& p,
                           Vector& lam) const {
  const int m = working_set_size();
  const Vector v = qchol_.solve(a);
  if (m == 0) {
    p = -v;
    lam.resize(0);
    return;
  }
  const auto Lm = Ls_.topLeftCorner(m, m);
  const Vector rhs = b + N_.leftCols(m).transpose() * v;
  const Vector w = Lm.triangularView<Eigen::Lower>().solve(rhs);
  lam = Lm.transpose().triangularView<Eigen::Upper>().solve(w);
  p = QiN_.leftCols(m) * lam - v;
}

void QpWorkspace::kkt_solve(const Vector& a, const Vector& b, Vector& p,
                            Vector& lam) const {
  const int m = working_set_size();
  kkt_base(a, b, p, lam);
  // Refine against the full KKT residual. The cached factors alone lose
  // digits when Q mixes O(1) and near-zero curvature; one or two sweeps
  // restore the solution to roundoff relative to the data.
  const double scale =
      std::max({1.0, a.lpNorm<Eigen::Infinity>(),
                m > 0 ? b.lpNorm<Eigen::Infinity>() : 0.0});
  for (int sweep = 0; sweep < 3; ++sweep) {
    Vector ra = -a - Q_ * p;
    Vector rb;
    if (m > 0) {
      ra += N_.leftCols(m) * lam;
      rb = b - N_.leftCols(m).transpose() * p;
    }
    const double res = std::max(ra.lpNorm<Eigen::Infinity>(),
                                m > 0 ? rb.lpNorm<Eigen::Infinity>() : 0.0);
    if (res <= 8 * kEps * scale) break;
    Vector dp, dl;
    kkt_base(-ra, rb, dp, dl);
    p += dp;
    if (m > 0) lam += dl;
  }
}

QpSolution QpWorkspace::solve(const Vector& q) {
  if (q.size() != n_) throw std::invalid_argument("linear term has wrong dimension");
  QpSolution sol;
  if (!started_) {
    // Cold start: clip the unconstrained minimizer into the box rows, then
    // project elastically onto the full row set.
    Vector seed = qchol_.solve(-q);
    const int b0 = stacked_.box_offset();
    for (int i = 0; i < n_; ++i) {
      const double lo = stacked_.lower[b0 + i];
      const double up = stacked_.upper[b0 + i];
      if (!bound_absent(lo)) seed[i] = std::max(seed[i], lo);
      if (!bound_absent(up)) seed[i] = std::min(seed[i], up);
    }
    auto feas = find_feasible_point(stacked_, seed, opt_.tolerance);
    if (!feas) {
      sol.status = QpStatus::Infeasible;
      sol.x = seed;
      sol.dual.setZero(m_rows_);
      return sol;
    }
    set_start(*feas);
  }

  const int cap = opt_.iteration_cap_factor * (n_ + m_rows_);
  Vector x = x_;
  Vector p, lam;
  std::vector<char> skip(m_rows_, 0);  // dependent rows, cleared on drops
  bool optimal = false;
  bool at_minimizer = false;  // last step was full and unblocked

  while (true) {
    if (sol.iterations++ >= cap) break;
    const Vector gc = Q_ * x + q;
    kkt_solve(gc, Vector::Zero(working_set_size()), p, lam);
    const double pscale = p.lpNorm<Eigen::Infinity>();

    // An unblocked full step lands on the working-set minimizer by
    // construction, so accept it as stationary even when the recomputed
    // direction is solve noise above the tolerance (large |q| leaves a
    // noise floor of roughly eps * |q|).
    if (at_minimizer ||
        pscale <= opt_.tolerance * std::max(1.0, x.lpNorm<Eigen::Infinity>())) {
      at_minimizer = false;
      // Stationary on the current face; drop the worst wrong-sign multiplier
      // or accept. Equality rows keep free-signed multipliers.
      const double lam_scale =
          lam.size() > 0 ? std::max(1.0, lam.cwiseAbs().maxCoeff()) : 1.0;
      int worst = -1;
      double worst_val = -opt_.tolerance * lam_scale;
      for (int j = 0; j < working_set_size(); ++j) {
        if (ws_[j].equality) continue;
        if (lam[j] < worst_val) {
          worst_val = lam[j];
          worst = j;
        }
      }
      if (worst < 0) {
        optimal = true;
        break;
      }
      drop(worst);
      ++sol.working_set_changes;
      std::fill(skip.begin(), skip.end(), 0);
      continue;
    }

    // Ratio test: longest step along p before a row bound blocks, capped at
    // the full step. Ties resolve to the smallest stacked row index.
    double alpha = 1.0;
    int brow = -1, bside = 0;
    const Vector Ap = stacked_.rows * p;
    const Vector Ax = stacked_.rows * x;
    for (int r = 0; r < m_rows_; ++r) {
      if (in_ws_[r] || skip[r]) continue;
      const double tiny = 1e-13 * row_scale_[r] * pscale;
      if (Ap[r] > tiny && !bound_absent(stacked_.upper[r])) {
        const double a = std::max(0.0, stacked_.upper[r] - Ax[r]) / Ap[r];
        if (a < alpha) {
          alpha = a;
          brow = r;
          bside = -1;
        }
      } else if (Ap[r] < -tiny && !bound_absent(stacked_.lower[r])) {
        const double a = std::max(0.0, Ax[r] - stacked_.lower[r]) / (-Ap[r]);
        if (a < alpha) {
          alpha = a;
          brow = r;
          bside = +1;
        }
      }
    }
    x += alpha * p;
    if (brow >= 0) {
      if (grow(brow, bside)) {
        ++sol.working_set_changes;
      } else {
        skip[brow] = 1;
      }
    } else {
      at_minimizer = true;
    }
  }

  if (!optimal) {
    sol.status = QpStatus::IterationLimit;
    sol.x = x;
    sol.dual.setZero(m_rows_);
    x_ = x;
    return sol;
  }

  // Polish on the final working set: exact equality-constrained solve snaps
  // active rows onto their bounds and recomputes consistent multipliers.
  const int m = working_set_size();
  Vector xp, lp;
  kkt_solve(q, bw_.head(m), xp, lp);
  if (stacked_.max_violation(xp) <= 10 * opt_.tolerance) {
    x = xp;
    lam = lp;
  }

  sol.x = x;
  sol.dual.setZero(m_rows_);
  for (int j = 0; j < m; ++j) sol.dual[ws_[j].row] = ws_[j].side * lam[j];
  x_ = x;
  return sol;
}

std::optional<Vector> find_feasible_point(const StackedConstraints& stacked,
                                          const Vector& seed, double tol) {
  if (stacked.max_violation(seed) <= tol) return seed;
  const int n = stacked.n;
  const int mr = stacked.total_rows();

  // Elastic rows over (x, theta): every finite side is widened by
  // theta * (its violation at the seed + a margin), so (seed, 1) is strictly
  // feasible; a vanishing theta* recovers feasibility of the original rows.
  std::vector<Vector> erows;
  std::vector<double> elo, eup;
  const Vector vals = stacked.rows * seed;
  for (int r = 0; r < mr; ++r) {
    const double lo = stacked.lower[r];
    const double up = stacked.upper[r];
    if (!bound_absent(lo)) {
      Vector row(n + 1);
      row.head(n) = stacked.rows.row(r).transpose();
      row[n] = std::max(0.0, lo - vals[r]) + 0.1 * (1.0 + std::abs(lo));
      erows.push_back(row);
      elo.push_back(lo);
      eup.push_back(kInf);
    }
    if (!bound_absent(up)) {
      Vector row(n + 1);
      row.head(n) = stacked.rows.row(r).transpose();
      row[n] = -(std::max(0.0, vals[r] - up) + 0.1 * (1.0 + std::abs(up)));
      erows.push_back(row);
      elo.push_back(-kInf);
      eup.push_back(up);
    }
  }

  StackedConstraints es;
  es.n_c = 0;
  es.n_A = static_cast<int>(erows.size());
  es.n = n + 1;
  es.rows.setZero(es.total_rows(), n + 1);
  es.lower.resize(es.total_rows());
  es.upper.resize(es.total_rows());
  es.origin.resize(es.total_rows());
  for (int r = 0; r < es.n_A; ++r) {
    es.rows.row(r) = erows[r].transpose();
    es.lower[r] = elo[r];
    es.upper[r] = eup[r];
    es.origin[r] = {RowSource::General, r};
  }
  for (int i = 0; i <= n; ++i) {
    const int r = es.n_A + i;
    es.rows(r, i) = 1.0;
    es.lower[r] = i == n ? 0.0 : -kInf;
    es.upper[r] = i == n ? 1.0 : kInf;
    es.origin[r] = {RowSource::Box, i};
  }

  // Nudge a nearly feasible point the last stretch: pin every row that sits
  // within `band` of a bound (or beyond it) and apply the minimum-norm
  // least-squares correction. The elastic solve below leaves absolute noise
  // of order eps * big because its multipliers scale with the penalty weight;
  // this projection redoes the final step in well-scaled arithmetic.
  auto nudge = [&](Vector x) -> Vector {
    for (int round = 0; round < 4; ++round) {
      const double viol = stacked.max_violation(x);
      if (viol <= tol) break;
      const Vector v = stacked.rows * x;
      std::vector<int> rows;
      std::vector<double> targets;
      for (int r = 0; r < mr; ++r) {
        const double rs = std::max(1.0, stacked.rows.row(r).cwiseAbs().maxCoeff());
        const double band = std::max(4.0 * viol, 1e3 * kEps) * rs;
        const double lo = stacked.lower[r];
        const double up = stacked.upper[r];
        if (!bound_absent(lo) && !bound_absent(up) && up - lo <= 2 * band) {
          rows.push_back(r);
          targets.push_back(0.5 * (lo + up));
        } else if (!bound_absent(lo) && v[r] - lo <= band) {
          rows.push_back(r);
          targets.push_back(lo);
        } else if (!bound_absent(up) && up - v[r] <= band) {
          rows.push_back(r);
          targets.push_back(up);
        }
      }
      if (rows.empty()) break;
      Matrix Aact(static_cast<int>(rows.size()), n);
      Vector resid(static_cast<int>(rows.size()));
      for (size_t k = 0; k < rows.size(); ++k) {
        Aact.row(static_cast<int>(k)) = stacked.rows.row(rows[k]);
        resid[static_cast<int>(k)] = targets[k] - v[rows[k]];
      }
      x += Aact.completeOrthogonalDecomposition().solve(resid);
    }
    return x;
  };

  Vector start(n + 1);
  start << seed, 1.0;
  Vector q(n + 1);
  const double scale = std::max(1.0, seed.lpNorm<Eigen::Infinity>());
  QpWorkspace ws(Matrix::Identity(n + 1, n + 1), es, QpOptions{tol, 10});
  ws.set_start(start);
  for (double big : {1e4 * scale, 1e6 * scale, 1e8 * scale}) {
    q << -seed, big;
    const QpSolution s = ws.solve(q);
    if (s.status != QpStatus::Optimal) continue;
    Vector x = s.x.head(n);
    double viol = stacked.max_violation(x);
    if (viol > tol && viol <= 1e-3) {
      x = nudge(x);
      viol = stacked.max_violation(x);
    }
    if (viol <= tol) return x;
  }
  return std::nullopt;
}

}  // namespace lcqp
