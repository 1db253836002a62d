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

// Event-driven simulation of the swing/impact cycle: integrate the swing
// phase until the swing foot reaches the ground ahead of the stance foot,
// apply the impact map, relabel, and repeat.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gaitforge/dynamics.hpp"
#include "gaitforge/model_params.hpp"

namespace gaitforge {

/// Hip torque u(t) over one step. Evaluation outside [0, duration] clamps to
/// the endpoint values.
class ControlSignal {
 public:
  static ControlSignal zero(double duration) { return constant(0.0, duration); }

  static ControlSignal constant(double value, double duration) {
    ControlSignal c;
    c.times_ = {0.0, duration};
    c.values_ = {value, value};
    return c;
  }

  /// Piecewise-linear through (times[k], values[k]); times strictly increasing.
  static ControlSignal sampled(std::vector<double> times, std::vector<double> values) {
    if (times.size() < 2 || times.size() != values.size()) {
      throw std::invalid_argument("ControlSignal::sampled: need >= 2 matching samples");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
      if (!(times[k] > times[k - 1])) {
        throw std::invalid_argument("ControlSignal::sampled: times must increase");
      }
    }
    ControlSignal c;
    c.times_ = std::move(times);
    c.values_ = std::move(values);
    return c;
  }

  double operator()(double t) const {
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return (1.0 - w) * values_[k] + w * values_[k + 1];
  }

  double duration() const { return times_.back(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

  ControlSignal mirrored() const {
    ControlSignal c = *this;
    for (double& v : c.values_) v = -v;
    return c;
  }

 private:
  ControlSignal() = default;
  std::vector<double> times_;
  std::vector<double> values_;
};

struct SimOptions {
  double dt = 1e-3;             // s, fixed RK4 step (initial step when adaptive)
  double max_time = 5.0;        // s per step
  double event_time_tol = 1e-12;
  double arming_height = 1e-6;  // m
  double min_forward = 1e-3;    // m, swing foot ahead of stance foot at the event
  double direction = 1.0;       // +1 walks toward +x, -1 toward -x
  bool adaptive = false;        // step-doubling error control
  double abs_tol = 1e-10;
  double min_dt = 1e-12;
};

enum class SimFailure { NoImpact, IntegrationFailure, Fall, BoundViolation };

inline const char* to_string(SimFailure f) {
  switch (f) {
    case SimFailure::NoImpact: return "NoImpact";
    case SimFailure::IntegrationFailure: return "IntegrationFailure";
    case SimFailure::Fall: return "Fall";
    case SimFailure::BoundViolation: return "BoundViolation";
  }
  return "?";
}

class SimulationError : public std::runtime_error {
 public:
  SimulationError(SimFailure reason, const std::string& what, int step = 0)
      : std::runtime_error(std::string(to_string(reason)) + ": " + what), reason_(reason), step_(step) {}
  SimFailure reason() const { return reason_; }
  int step() const { return step_; }

 private:
  SimFailure reason_;
  int step_;
};

struct StepTrace {
  std::vector<double> t;
  std::vector<SwingState> x;
  std::vector<double> u;
  std::vector<GroundForces> grf;
  double impact_time = 0.0;
  ImpactResult impact;
  double actuator_work = 0.0;  // integral of qd_sw * u over the swing

  const SwingState& x_minus() const { return x.back(); }
};

namespace detail {

using Augmented = Eigen::Matrix<double, 5, 1>;  // [x_s; hip work]

inline Augmented augmented_rhs(double t, const Augmented& y, const ControlSignal& ctrl,
                               const ModelParams& p) {
  const double u = ctrl(t);
  Augmented d;
  d.head<4>() = swing_dynamics(SwingState(y.head<4>()), u, p);
  d(4) = y(kQdSw) * u;
  return d;
}

inline Augmented rk4_step(double t, const Augmented& y, double h, const ControlSignal& ctrl,
                          const ModelParams& p) {
  const Augmented k1 = augmented_rhs(t, y, ctrl, p);
  const Augmented k2 = augmented_rhs(t + 0.5 * h, y + 0.5 * h * k1, ctrl, p);
  const Augmented k3 = augmented_rhs(t + 0.5 * h, y + 0.5 * h * k2, ctrl, p);
  const Augmented k4 = augmented_rhs(t + h, y + h * k3, ctrl, p);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline double height(const Augmented& y, const ModelParams& p) {
  return foot_height(SwingState(y.head<4>()), p);
}

/// Root of the foot height inside one step of length h from (t, y): Illinois
/// regula falsi on the sub-step length, bracket kept throughout.
inline double locate_event(double t, const Augmented& y, double h, const ControlSignal& ctrl,
                           const ModelParams& p, double time_tol) {
  double a = 0.0, b = h;
  double fa = height(y, p);
  double fb = height(rk4_step(t, y, h, ctrl, p), p);
  if (fb == 0.0) return h;
  int side = 0;
  const double height_tol = 8.0 * std::numeric_limits<double>::epsilon() * p.leg_length;
  for (int it = 0; it < 200 && (b - a) > time_tol; ++it) {
    double c = (a * fb - b * fa) / (fb - fa);
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    const double fc = height(rk4_step(t, y, c, ctrl, p), p);
    if (std::abs(fc) <= height_tol) return c;
    if ((fc > 0) == (fb > 0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  const double ha = std::abs(height(rk4_step(t, y, a, ctrl, p), p));
  const double hb = std::abs(height(rk4_step(t, y, b, ctrl, p), p));
  return (a > 0.0 && ha < hb) ? a : b;
}

}  // namespace detail

/// Integrates the swing phase from x0 until the impact event.
///
/// The event is a sign change of the swing-foot height, located to
/// `event_time_tol`, at which the foot is more than `min_forward` ahead of
/// the stance foot. Crossings before the height first leaves the ground by
/// `arming_height` are ignored.
inline StepTrace integrate_swing(const SwingState& x0, const ControlSignal& ctrl, const ModelParams& p,
                                 const SimOptions& opts = {}) {
  if (!x0.allFinite()) throw std::invalid_argument("integrate_swing: non-finite initial state");
  StepTrace tr;
  detail::Augmented y;
  y.head<4>() = x0;
  y(4) = 0.0;
  double t = 0.0;
  auto record = [&](double time, const detail::Augmented& s) {
    const SwingState xs = s.head<4>();
    const double u = ctrl(time);
    tr.t.push_back(time);
    tr.x.push_back(xs);
    tr.u.push_back(u);
    tr.grf.push_back(stance_grf(xs, u, p));
  };
  record(t, y);

  bool armed = std::abs(detail::height(y, p)) > opts.arming_height;
  double h = opts.dt;
  while (t < opts.max_time) {
    h = std::min(h, opts.max_time - t + 1e-15);
    detail::Augmented next;
    if (opts.adaptive) {
      for (;;) {
        const detail::Augmented full = detail::rk4_step(t, y, h, ctrl, p);
        const detail::Augmented half =
            detail::rk4_step(t + 0.5 * h, detail::rk4_step(t, y, 0.5 * h, ctrl, p), 0.5 * h, ctrl, p);
        const double err = (half - full).head<4>().cwiseAbs().maxCoeff() / 15.0;
        if (std::isfinite(err) && err <= opts.abs_tol) {
          next = half + (half - full) / 15.0;
          next(4) = half(4);
          break;
        }
        h *= std::isfinite(err) ? std::clamp(0.9 * std::pow(opts.abs_tol / err, 0.2), 0.1, 0.5) : 0.1;
        if (h < opts.min_dt) {
          throw SimulationError(SimFailure::IntegrationFailure, "step size underflow at t=" + std::to_string(t));
        }
      }
    } else {
      next = detail::rk4_step(t, y, h, ctrl, p);
    }
    if (!next.allFinite()) {
      throw SimulationError(SimFailure::IntegrationFailure, "non-finite state at t=" + std::to_string(t));
    }

    const double h0 = detail::height(y, p), h1 = detail::height(next, p);
    if (armed && ((h0 > 0.0 && h1 <= 0.0) || (h0 < 0.0 && h1 >= 0.0))) {
      double tau = h;
      detail::Augmented at = next;
      if (opts.adaptive) {
        // refine on the RK4 substep; the accepted step used two half steps
        tau = detail::locate_event(t, y, h, ctrl, p, opts.event_time_tol);
        at = detail::rk4_step(t, y, tau, ctrl, p);
      } else if (h1 != 0.0) {
        tau = detail::locate_event(t, y, h, ctrl, p, opts.event_time_tol);
        at = detail::rk4_step(t, y, tau, ctrl, p);
      }
      if (opts.direction * step_length(SwingState(at.head<4>()), p) > opts.min_forward) {
        record(t + tau, at);
        tr.impact_time = t + tau;
        tr.actuator_work = at(4);
        tr.impact = impact_map(tr.x.back(), p);
        return tr;
      }
    }
    y = next;
    t += h;
    if (opts.adaptive) h = std::min(2.0 * h, opts.dt);
    if (!armed && std::abs(detail::height(y, p)) > opts.arming_height) armed = true;
    if (std::cos(y(kQst)) <= 0.0) {
      throw SimulationError(SimFailure::Fall, "hip reached the ground at t=" + std::to_string(t));
    }
    record(t, y);
  }
  throw SimulationError(SimFailure::NoImpact,
                        "no swing-foot strike within " + std::to_string(opts.max_time) + " s");
}

struct RolloutFailure {
  SimFailure reason;
  int step;  // zero-based index of the step that failed
  std::string message;
};

struct RolloutResult {
  std::vector<StepTrace> steps;
  std::optional<RolloutFailure> failure;
};

inline bool within_bounds(const SwingState& x, const ModelParams& p, double slack = 1e-9) {
  for (int i : {kQst, kQsw}) {
    if (x(i) < p.q_min - slack || x(i) > p.q_max + slack) return false;
  }
  for (int i : {kQdSt, kQdSw}) {
    if (x(i) < p.qd_min - slack || x(i) > p.qd_max + slack) return false;
  }
  return true;
}

/// Repeats swing integration and impact, feeding each post-impact state into
/// the next step with the same control. Stops at the first failure.
inline RolloutResult rollout(const SwingState& x0, const ControlSignal& ctrl, int n_steps, const ModelParams& p,
                             const SimOptions& opts = {}) {
  if (n_steps < 1) throw std::invalid_argument("rollout: n_steps must be >= 1");
  RolloutResult out;
  SwingState x = x0;
  for (int k = 0; k < n_steps; ++k) {
    if (!within_bounds(x, p)) {
      out.failure = RolloutFailure{SimFailure::BoundViolation, k, "step start state outside bounds"};
      return out;
    }
    try {
      out.steps.push_back(integrate_swing(x, ctrl, p, opts));
    } catch (const SimulationError& e) {
      out.failure = RolloutFailure{e.reason(), k, e.what()};
      return out;
    } catch (const SingularImpact& e) {
      out.failure = RolloutFailure{SimFailure::IntegrationFailure, k, e.what()};
      return out;
    }
    x = out.steps.back().impact.x_plus;
  }
  return out;
}

/// || Delta(x_final) - x_start ||_inf
inline double periodicity_residual(const SwingState& x_start, const SwingState& x_final, const ModelParams& p) {
  return (impact_map(x_final, p).x_plus - x_start).cwiseAbs().maxCoeff();
}

struct PeriodicStart {
  SwingState x;
  double residual = 0.0;  // || P(x) - x ||_inf of the simulated step map P
  int iterations = 0;
  bool converged = false;
};

/// Fixed point of the simulated step map x -> Delta(swing(x)) under a fixed
/// control, by Newton iteration with a forward-difference Jacobian.
inline PeriodicStart refine_periodic_start(const SwingState& guess, const ControlSignal& ctrl, const ModelParams& p,
                                           const SimOptions& opts = {}, int max_iter = 20, double tol = 1e-13) {
  auto step_map = [&](const SwingState& x) { return SwingState(integrate_swing(x, ctrl, p, opts).impact.x_plus); };
  PeriodicStart out;
  out.x = guess;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::Vector4d F = step_map(out.x) - out.x;
    out.residual = F.cwiseAbs().maxCoeff();
    out.iterations = it;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    Eigen::Matrix4d J;
    for (int j = 0; j < 4; ++j) {
      SwingState xp = out.x;
      const double h = 1e-7 * std::max(1.0, std::abs(xp(j)));
      xp(j) += h;
      J.col(j) = (step_map(xp) - xp - F) / h;
    }
    const Eigen::Vector4d dx = J.partialPivLu().solve(-F);
    // simple backtracking on the residual norm
    double alpha = 1.0;
    for (int ls = 0; ls < 20; ++ls) {
      const SwingState trial = out.x + alpha * dx;
      try {
        if ((step_map(trial) - trial).cwiseAbs().maxCoeff() < out.residual) break;
      } catch (const std::exception&) {
      }
      alpha *= 0.5;
    }
    out.x += alpha * dx;
  }
  out.residual = (step_map(out.x) - out.x).cwiseAbs().maxCoeff();
  out.converged = out.residual <= tol;
  return out;
}

/// CSV with columns t,q_st,q_sw,qd_st,qd_sw,u,F_T,F_N. Times of later steps
/// continue from the previous impact.
inline void write_csv(std::ostream& os, const std::vector<StepTrace>& steps) {
  os << "t,q_st,q_sw,qd_st,qd_sw,u,F_T,F_N\n";
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(17);
  double offset = 0.0;
  for (const StepTrace& s : steps) {
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      os << offset + s.t[k] << ',' << s.x[k](0) << ',' << s.x[k](1) << ',' << s.x[k](2) << ','
         << s.x[k](3) << ',' << s.u[k] << ',' << s.grf[k].F_T << ',' << s.grf[k].F_N << '\n';
    }
    offset += s.impact_time;
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

}  // namespace gaitforge
