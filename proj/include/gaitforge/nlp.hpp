// Copyright 2026 The gaitforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Augmented-Lagrangian solver for small dense NLPs:
//
//   min f(z)  s.t.  c_eq(z) = 0,  c_in(z) <= 0,  lo <= z <= hi.
//
// Inequalities get slacks s >= 0 (c_in + s = 0). Each outer iteration
// minimizes the augmented Lagrangian over the box with a projected
// quasi-Newton method whose model Hessian is B + rho J^T J, B being a damped
// BFGS approximation of the Lagrangian Hessian.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gaitforge {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct NlpProblem {
  int n = 0;
  int m_eq = 0;
  int m_in = 0;
  std::function<double(const Vec&)> objective;
  std::function<Vec(const Vec&)> eq;    // m_eq residuals, = 0
  std::function<Vec(const Vec&)> ineq;  // m_in residuals, <= 0
  Vec lower, upper;
  // Optional derivatives. Missing ones are formed by forward differences.
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> jac_eq;
  std::function<Mat(const Vec&)> jac_ineq;
  // Optional Hessian of sigma f + lambda^T c_eq + mu^T c_in. Without it the
  // solver keeps a damped BFGS approximation.
  std::function<Mat(const Vec& z, double sigma, const Vec& lambda, const Vec& mu)> hessian;

  void validate() const {
    if (n <= 0 || m_eq < 0 || m_in < 0) throw std::invalid_argument("NlpProblem: bad dimensions");
    if (!objective) throw std::invalid_argument("NlpProblem: objective missing");
    if (m_eq > 0 && !eq) throw std::invalid_argument("NlpProblem: eq missing");
    if (m_in > 0 && !ineq) throw std::invalid_argument("NlpProblem: ineq missing");
    if (lower.size() != n || upper.size() != n) throw std::invalid_argument("NlpProblem: bound size mismatch");
    for (int i = 0; i < n; ++i) {
      if (!(lower(i) <= upper(i))) throw std::invalid_argument("NlpProblem: lower > upper");
    }
  }
};

/// Unbounded box of dimension n.
inline void set_unbounded(NlpProblem& p) {
  p.lower = Vec::Constant(p.n, -std::numeric_limits<double>::infinity());
  p.upper = Vec::Constant(p.n, std::numeric_limits<double>::infinity());
}

enum class SolveStatus { Converged, MaxIter, Infeasible, Diverged, Interrupted };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Diverged: return "Diverged";
    case SolveStatus::Interrupted: return "Interrupted";
  }
  return "?";
}

class InvalidStart : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KktResiduals {
  double stationarity = 0.0;         // ||grad L||_inf with bound-active components removed
  double stationarity_scaled = 0.0;  // divided by the multiplier-size factor s_d
  double eq_violation = 0.0;         // ||c_eq||_inf
  double ineq_violation = 0.0;       // max(0, max c_in)
  double complementarity = 0.0;      // max |mu_i c_in,i|

  bool operator==(const KktResiduals&) const = default;
};

struct OuterRecord {
  int outer = 0;
  int inner_iterations = 0;
  double objective = 0.0;
  double violation = 0.0;  // max(eq_violation, ineq_violation)
  double stationarity = 0.0;
  double rho = 0.0;
};

struct NlpSolution {
  Vec z;
  double J = 0.0;
  Vec lambda;  // equality multipliers
  Vec mu;      // inequality multipliers, >= 0
  KktResiduals kkt;
  int iterations = 0;        // total inner iterations
  int outer_iterations = 0;
  int evaluations = 0;       // objective/constraint evaluation rounds
  SolveStatus status = SolveStatus::MaxIter;
  std::vector<OuterRecord> history;
};

struct SolverOptions {
  double rho0 = 10.0;
  double rho_growth = 10.0;
  double rho_max = 1e10;
  int max_outer = 30;
  int max_inner = 500;
  double eq_tol = 1e-6;
  double ineq_tol = 1e-8;
  double stationarity_tol = 1e-4;  // scaled; the Converged threshold
  double target_stationarity = 1e-6;  // keep iterating toward this while progress is possible
  double max_step = 1.0;  // inf-norm cap on an inner step
  double fd_step = 1e-6;  // central differences for derivatives the problem omits
  double infeasible_level = 1e-3;
  int infeasible_patience = 5;
  double infeasible_min_rho = 1e4;
  int verbosity = 0;
  std::ostream* log = nullptr;
  std::function<bool()> should_stop;  // polled once per inner iteration
};

namespace detail {

inline double inf_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

inline double fd_step_for(double z, double lo, double hi, double base) {
  const double h = base * std::max(1.0, std::abs(z));
  return (z + h > hi && z - h >= lo) ? -h : h;
}

// Forward differences with step base * max(1, |z_j|), flipped inward at an
// upper bound.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& c, const Vec& z, const Vec& c0, const Vec& lo,
                       const Vec& hi, double base) {
  Mat J(c0.size(), z.size());
  Vec zz = z;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double h = fd_step_for(z(j), lo(j), hi(j), base);
    zz(j) = z(j) + h;
    J.col(j) = (c(zz) - c0) / (zz(j) - z(j));
    zz(j) = z(j);
  }
  return J;
}

// Central differences, used when the problem supplies no derivatives of its
// own. Falls back to a one-sided difference against a bound.
inline Mat fd_jacobian_central(const std::function<Vec(const Vec&)>& c, const Vec& z, const Vec& c0,
                               const Vec& lo, const Vec& hi, double base) {
  Mat J(c0.size(), z.size());
  Vec zz = z;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double h = base * std::max(1.0, std::abs(z(j)));
    if (z(j) + h <= hi(j) && z(j) - h >= lo(j)) {
      zz(j) = z(j) + h;
      const double hp = zz(j) - z(j);
      const Vec cp = c(zz);
      zz(j) = z(j) - h;
      const double hm = z(j) - zz(j);
      J.col(j) = (cp - c(zz)) / (hp + hm);
    } else {
      const double hs = fd_step_for(z(j), lo(j), hi(j), base);
      zz(j) = z(j) + hs;
      J.col(j) = (c(zz) - c0) / (zz(j) - z(j));
    }
    zz(j) = z(j);
  }
  return J;
}

inline Vec fd_gradient_central(const std::function<double(const Vec&)>& f, const Vec& z, double f0, const Vec& lo,
                               const Vec& hi, double base) {
  auto fv = [&](const Vec& x) { return Vec::Constant(1, f(x)); };
  return fd_jacobian_central(fv, z, Vec::Constant(1, f0), lo, hi, base).row(0).transpose();
}

// Values and first derivatives of the original problem at z.
struct Point {
  Vec z;
  double f = 0.0;
  Vec ce, ci;
  Vec grad;
  Mat Je, Ji;
  bool finite = true;
};

inline void eval_values(const NlpProblem& p, Point& pt) {
  pt.f = p.objective(pt.z);
  pt.ce = p.m_eq ? p.eq(pt.z) : Vec();
  pt.ci = p.m_in ? p.ineq(pt.z) : Vec();
  if (pt.ce.size() != p.m_eq || pt.ci.size() != p.m_in) {
    throw std::logic_error("NlpProblem: constraint callable returned wrong size");
  }
  pt.finite = std::isfinite(pt.f) && pt.ce.allFinite() && pt.ci.allFinite();
}

inline void eval_derivatives(const NlpProblem& p, Point& pt, double base) {
  pt.grad = p.gradient ? p.gradient(pt.z) : fd_gradient_central(p.objective, pt.z, pt.f, p.lower, p.upper, base);
  if (p.m_eq) {
    pt.Je = p.jac_eq ? p.jac_eq(pt.z) : fd_jacobian_central(p.eq, pt.z, pt.ce, p.lower, p.upper, base);
  } else {
    pt.Je.resize(0, p.n);
  }
  if (p.m_in) {
    pt.Ji = p.jac_ineq ? p.jac_ineq(pt.z) : fd_jacobian_central(p.ineq, pt.z, pt.ci, p.lower, p.upper, base);
  } else {
    pt.Ji.resize(0, p.n);
  }
  pt.finite = pt.finite && pt.grad.allFinite() && pt.Je.allFinite() && pt.Ji.allFinite();
}

inline KktResiduals kkt_at(const NlpProblem& p, const Point& pt, const Vec& lambda, const Vec& mu) {
  KktResiduals k;
  Vec r = pt.grad;
  if (p.m_eq) r += pt.Je.transpose() * lambda;
  if (p.m_in) r += pt.Ji.transpose() * mu;
  for (int i = 0; i < p.n; ++i) {
    const double tol = 1e-10 * std::max(1.0, std::abs(pt.z(i)));
    if (pt.z(i) <= p.lower(i) + tol && r(i) > 0.0) r(i) = 0.0;
    if (pt.z(i) >= p.upper(i) - tol && r(i) < 0.0) r(i) = 0.0;
  }
  k.stationarity = inf_norm(r);
  constexpr double s_max = 100.0;
  const int m = p.m_eq + p.m_in;
  const double mult = m ? (lambda.lpNorm<1>() + mu.lpNorm<1>()) / m : 0.0;
  k.stationarity_scaled = k.stationarity / (std::max(s_max, mult) / s_max);
  k.eq_violation = inf_norm(pt.ce);
  k.ineq_violation = p.m_in ? std::max(0.0, pt.ci.maxCoeff()) : 0.0;
  k.complementarity = p.m_in ? inf_norm(mu.cwiseProduct(pt.ci)) : 0.0;
  return k;
}

}  // namespace detail

/// KKT residuals of (z, lambda, mu); derivatives as the solver would form them.
inline KktResiduals check_kkt(const NlpProblem& problem, const Vec& z, const Vec& lambda, const Vec& mu,
                              double fd_step = 1e-6) {
  problem.validate();
  if (z.size() != problem.n || lambda.size() != problem.m_eq || mu.size() != problem.m_in) {
    throw std::invalid_argument("check_kkt: dimension mismatch");
  }
  detail::Point pt;
  pt.z = z;
  detail::eval_values(problem, pt);
  detail::eval_derivatives(problem, pt, fd_step);
  return detail::kkt_at(problem, pt, lambda, mu);
}

namespace detail {

// Augmented-Lagrangian state over y = [z; s].
class AlSolver {
 public:
  static constexpr double kMultiplierCap = 1e12;

  AlSolver(const NlpProblem& p, const SolverOptions& o) : p_(p), o_(o), n_(p.n), N_(p.n + p.m_in), m_(p.m_eq + p.m_in) {
    lo_.resize(N_);
    hi_.resize(N_);
    lo_ << p.lower, Vec::Zero(p.m_in);
    hi_ << p.upper, Vec::Constant(p.m_in, std::numeric_limits<double>::infinity());
  }

  NlpSolution run(const Vec& z0) {
    NlpSolution sol;
    Vec y(N_);
    y.head(n_) = z0.cwiseMax(p_.lower).cwiseMin(p_.upper);
    Point pt;
    pt.z = y.head(n_);
    eval_values(p_, pt);
    if (!std::isfinite(pt.f)) throw InvalidStart("solve: objective is not finite at the initial point");
    if (!pt.finite) throw InvalidStart("solve: constraints are not finite at the initial point");
    if (p_.m_in) y.tail(p_.m_in) = (-pt.ci).cwiseMax(0.0);
    eval_derivatives(p_, pt, o_.fd_step);
    ++evals_;

    lam_ = Vec::Zero(m_);
    rho_ = o_.rho0;
    double omega = 1.0 / rho_;
    double prev_c = std::numeric_limits<double>::infinity();
    B_ = Mat::Identity(N_, N_);

    int stall = 0;
    double prev_viol = std::numeric_limits<double>::infinity();
    sol.status = SolveStatus::MaxIter;
    for (int outer = 0; outer < o_.max_outer; ++outer) {
      const InnerResult in = minimize(y, pt, std::max(omega, 0.1 * o_.target_stationarity));
      sol.iterations += in.iterations;
      sol.outer_iterations = outer + 1;

      const Vec c = residual(y, pt);
      const Vec lam_hat = lam_ + rho_ * c;
      Vec lambda = lam_hat.head(p_.m_eq);
      Vec mu = lam_hat.tail(p_.m_in).cwiseMax(0.0);
      const KktResiduals k = kkt_at(p_, pt, lambda, mu);
      const double viol = std::max(k.eq_violation, k.ineq_violation);
      sol.history.push_back({outer, in.iterations, pt.f, viol, k.stationarity_scaled, rho_});
      if (o_.log && o_.verbosity > 0) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "outer %2d  inner %4d  J % .10e  eq %.3e  in %.3e  stat %.3e  rho %.1e\n",
                      outer, in.iterations, pt.f, k.eq_violation, k.ineq_violation, k.stationarity_scaled, rho_);
        *o_.log << buf;
      }
      sol.z = pt.z;
      sol.J = pt.f;
      sol.lambda = lambda;
      sol.mu = mu;
      sol.kkt = k;

      if (in.interrupted) {
        sol.status = SolveStatus::Interrupted;
        break;
      }
      if (in.diverged) {
        sol.status = SolveStatus::Diverged;
        break;
      }
      const bool feasible = k.eq_violation <= o_.eq_tol && k.ineq_violation <= o_.ineq_tol;
      const bool no_progress = in.stalled || in.iterations >= o_.max_inner;
      if (feasible && (k.stationarity_scaled <= o_.target_stationarity ||
                       (no_progress && k.stationarity_scaled <= o_.stationarity_tol))) {
        sol.status = SolveStatus::Converged;
        break;
      }
      // Only trusted once the penalty dominates the objective.
      if (rho_ >= o_.infeasible_min_rho && viol > o_.infeasible_level && viol > 0.9 * prev_viol) {
        if (++stall >= o_.infeasible_patience) {
          sol.status = SolveStatus::Infeasible;
          break;
        }
      } else {
        stall = 0;
      }
      prev_viol = std::min(prev_viol, viol);

      // Multipliers move every round; the penalty only grows when feasibility stalls.
      const double cnorm = inf_norm(c);
      lam_ = lam_hat.cwiseMax(-kMultiplierCap).cwiseMin(kMultiplierCap);
      if (cnorm > 0.5 * prev_c && rho_ < o_.rho_max) rho_ = std::min(rho_ * o_.rho_growth, o_.rho_max);
      prev_c = cnorm;
      omega = std::max(0.1 * omega, 0.1 * o_.target_stationarity);
    }
    // last-chance classification
    if (sol.status == SolveStatus::MaxIter && sol.kkt.eq_violation <= o_.eq_tol &&
        sol.kkt.ineq_violation <= o_.ineq_tol && sol.kkt.stationarity_scaled <= o_.stationarity_tol) {
      sol.status = SolveStatus::Converged;
    }
    sol.evaluations = evals_;
    return sol;
  }

 private:
  struct InnerResult {
    int iterations = 0;
    bool stalled = false;
    bool diverged = false;
    bool interrupted = false;
  };

  Vec residual(const Vec& y, const Point& pt) const {
    Vec c(m_);
    c.head(p_.m_eq) = pt.ce;
    c.tail(p_.m_in) = pt.ci + y.tail(p_.m_in);
    return c;
  }

  // Jacobian of the combined residual with respect to y.
  Mat jacobian(const Point& pt) const {
    Mat J = Mat::Zero(m_, N_);
    J.topLeftCorner(p_.m_eq, n_) = pt.Je;
    J.bottomLeftCorner(p_.m_in, n_) = pt.Ji;
    J.bottomRightCorner(p_.m_in, p_.m_in).setIdentity();
    return J;
  }

  double merit(const Point& pt, const Vec& c) const { return pt.f + lam_.dot(c) + 0.5 * rho_ * c.squaredNorm(); }

  Vec project(const Vec& y) const { return y.cwiseMax(lo_).cwiseMin(hi_); }

  // Model Hessian of the augmented Lagrangian at the current point.
  Mat model_hessian(const Point& pt, const Mat& J, const Vec& w) {
    Mat H = rho_ * J.transpose() * J;
    if (p_.hessian) {
      H.topLeftCorner(n_, n_) += p_.hessian(pt.z, 1.0, w.head(p_.m_eq), w.tail(p_.m_in));
    } else {
      H += B_;
    }
    return H;
  }

  // Projected Newton-type iteration on the augmented Lagrangian over the box.
  InnerResult minimize(Vec& y, Point& pt, double omega) {
    InnerResult res;
    Vec c = residual(y, pt);
    Mat J = jacobian(pt);
    Vec w = lam_ + rho_ * c;
    Vec gf = Vec::Zero(N_);
    gf.head(n_) = pt.grad;
    Vec g = gf + J.transpose() * w;
    double phi = merit(pt, c);
    Mat H = model_hessian(pt, J, w);
    std::vector<double> phi_hist{phi};
    double shift = 0.0;  // Levenberg-style floor on the Newton shift

    for (; res.iterations < o_.max_inner; ++res.iterations) {
      if (o_.should_stop && o_.should_stop()) {
        res.interrupted = true;
        return res;
      }
      const Vec pg = y - project(y - g);
      const double pg_norm = inf_norm(pg);
      if (pg_norm <= omega) return res;

      // Bertsekas epsilon-active set: those variables move onto their bound
      const double eps = std::min(1e-3, pg_norm);
      std::vector<int> free_idx;
      Vec d = Vec::Zero(N_);
      for (int i = 0; i < N_; ++i) {
        const bool near_lo = y(i) - lo_(i) <= eps && g(i) > 0.0;
        const bool near_hi = hi_(i) - y(i) <= eps && g(i) < 0.0;
        if (near_lo) {
          d(i) = lo_(i) - y(i);
        } else if (near_hi) {
          d(i) = hi_(i) - y(i);
        } else {
          free_idx.push_back(i);
        }
      }
      // Free components whose Newton step overshoots a bound are pinned there
      // and the reduced system re-solved, so the step does not get bent by
      // the projection.
      int nf = 0;
      for (int round = 0; round < 8; ++round) {
        nf = static_cast<int>(free_idx.size());
        if (nf == 0) break;
        Mat Hff(nf, nf);
        Vec rhs(nf);
        const Vec Hd = H * d;
        for (int a = 0; a < nf; ++a) {
          rhs(a) = -(g(free_idx[a]) + Hd(free_idx[a]));
          for (int b = 0; b < nf; ++b) Hff(a, b) = H(free_idx[a], free_idx[b]);
        }
        const Vec df = regularized_solve(Hff, rhs, shift);
        std::vector<int> still_free;
        for (int a = 0; a < nf; ++a) {
          const int i = free_idx[a];
          if (y(i) + df(a) < lo_(i)) {
            d(i) = lo_(i) - y(i);
          } else if (y(i) + df(a) > hi_(i)) {
            d(i) = hi_(i) - y(i);
          } else {
            d(i) = df(a);
            still_free.push_back(i);
          }
        }
        if (static_cast<int>(still_free.size()) == nf) break;
        for (int i : still_free) d(i) = 0.0;
        free_idx.swap(still_free);
      }
      if (!(g.dot(project(y + d) - y) < 0.0)) d = -g;  // not a descent direction
      const double d_norm = inf_norm(d);
      if (d_norm > o_.max_step) d *= o_.max_step / d_norm;

      // projected backtracking
      double alpha = 1.0;
      bool accepted = false;
      Vec y_new;
      Point pt_new;
      Vec c_new;
      double phi_new = 0.0;
      for (int ls = 0; ls < 40; ++ls) {
        y_new = project(y + alpha * d);
        pt_new.z = y_new.head(n_);
        eval_values(p_, pt_new);
        ++evals_;
        if (pt_new.finite) {
          c_new = residual(y_new, pt_new);
          phi_new = merit(pt_new, c_new);
          if (phi_new <= phi + 1e-4 * g.dot(y_new - y)) {
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (o_.log && o_.verbosity > 1) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "  inner %4d  phi % .12e  |pg| %.3e  free %d  |d| %.3e  alpha %.3e%s\n",
                      res.iterations, phi, pg_norm, nf, inf_norm(d), alpha, accepted ? "" : "  (rejected)");
        *o_.log << buf;
      }
      if (accepted && alpha == 1.0) {
        shift = shift < 1e-8 ? 0.0 : 0.25 * shift;
      } else if (!accepted || alpha < 0.25) {
        shift = std::max(10.0 * shift, 1e-3);
      }
      if (!accepted && shift < 1e12) continue;
      if (!accepted) {
        if (!p_.hessian && !B_.isIdentity()) {
          B_.setIdentity();  // stale curvature; retry with a fresh model
          H = model_hessian(pt, J, w);
          continue;
        }
        res.stalled = true;
        return res;
      }
      if (pt_new.f < -1e20) {
        res.diverged = true;
        return res;
      }

      eval_derivatives(p_, pt_new, o_.fd_step);
      if (!pt_new.finite) {
        res.diverged = true;
        return res;
      }
      const Mat J_new = jacobian(pt_new);
      const Vec w_new = lam_ + rho_ * c_new;
      Vec gf_new = Vec::Zero(N_);
      gf_new.head(n_) = pt_new.grad;

      if (!p_.hessian) {
        // damped BFGS on the Lagrangian part (Powell)
        const Vec s = y_new - y;
        Vec yv = (gf_new - gf) + (J_new - J).transpose() * w_new;
        const Vec Bs = B_ * s;
        const double sBs = s.dot(Bs);
        if (sBs > 0.0) {
          const double sy = s.dot(yv);
          if (sy < 0.2 * sBs) {
            const double theta = 0.8 * sBs / (sBs - sy);
            yv = theta * yv + (1.0 - theta) * Bs;
          }
          const double sy2 = s.dot(yv);
          if (sy2 > 1e-14 * sBs) B_ += yv * yv.transpose() / sy2 - Bs * Bs.transpose() / sBs;
        }
      }

      y = y_new;
      pt = std::move(pt_new);
      c = c_new;
      J = J_new;
      w = w_new;
      gf = gf_new;
      g = gf + J.transpose() * w;
      phi = phi_new;
      H = model_hessian(pt, J, w);
      phi_hist.push_back(phi);
      // rounding-level progress over the last 10 accepted steps
      constexpr std::size_t kWindow = 10;
      if (phi_hist.size() > kWindow &&
          phi_hist[phi_hist.size() - 1 - kWindow] - phi <= 1e-14 * std::max(1.0, std::abs(phi))) {
        res.stalled = true;
        ++res.iterations;
        return res;
      }
    }
    return res;
  }

  // (H + delta I)^{-1} rhs with the smallest delta >= min_shift from a
  // geometric ladder that makes the matrix positive definite.
  static Vec regularized_solve(const Mat& H, const Vec& rhs, double min_shift) {
    const int n = static_cast<int>(rhs.size());
    const double scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
    double delta = min_shift;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::LLT<Mat> llt(H + delta * Mat::Identity(n, n));
      if (llt.info() == Eigen::Success) {
        const Vec sol = llt.solve(rhs);
        if (sol.allFinite()) return sol;
      }
      delta = delta == 0.0 ? 1e-10 * scale : 10.0 * delta;
    }
    return rhs / (scale + min_shift);
  }

  const NlpProblem& p_;
  const SolverOptions& o_;
  int n_, N_, m_;
  Vec lo_, hi_, lam_;
  Mat B_;
  double rho_ = 0.0;
  int evals_ = 0;
};

}  // namespace detail

/// Deterministic for fixed (problem, z0, options). Throws InvalidStart only
/// if the problem is not finite at the projected z0.
inline NlpSolution solve(const NlpProblem& problem, const Vec& z0, const SolverOptions& opts = {}) {
  problem.validate();
  if (z0.size() != problem.n) throw std::invalid_argument("solve: z0 has wrong dimension");
  detail::AlSolver s(problem, opts);
  return s.run(z0);
}

}  // namespace gaitforge
