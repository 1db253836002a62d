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

// Trapezoidal direct collocation of one periodic step.
//
// Decision vector z = [x_1 .. x_v | u_1 .. u_v | t_f], x_k in R^4, on the
// uniform grid t_k = (k-1) t_f / (v-1).

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaitforge/dynamics.hpp"
#include "gaitforge/model_params.hpp"
#include "gaitforge/nlp.hpp"

namespace gaitforge {

enum class CostMode { SwingAngle, SwingRateSquared, Constant, TorqueSquared };

inline constexpr CostMode kAllCostModes[] = {CostMode::SwingAngle, CostMode::SwingRateSquared, CostMode::Constant,
                                             CostMode::TorqueSquared};

/// Short names used on the command line, in JSON and in catalog keys.
inline const char* cost_name(CostMode c) {
  switch (c) {
    case CostMode::SwingAngle: return "angle";
    case CostMode::SwingRateSquared: return "rate2";
    case CostMode::Constant: return "const";
    case CostMode::TorqueSquared: return "torque2";
  }
  return "?";
}

inline std::optional<CostMode> parse_cost_mode(const std::string& s) {
  for (CostMode c : kAllCostModes) {
    if (s == cost_name(c)) return c;
  }
  if (s == "SwingAngle") return CostMode::SwingAngle;
  if (s == "SwingRateSquared") return CostMode::SwingRateSquared;
  if (s == "Constant") return CostMode::Constant;
  if (s == "TorqueSquared") return CostMode::TorqueSquared;
  return std::nullopt;
}

struct GaitSpec {
  double TL = 0.5;  // desired step length, m
  CostMode cost = CostMode::TorqueSquared;
  int v = 25;  // collocation nodes
  double tf_min = 0.2;
  double tf_max = 2.0;
  ModelParams params;

  void validate() const {
    if (!(TL > 0.0) || !std::isfinite(TL)) throw std::invalid_argument("GaitSpec: TL must be > 0");
    if (v < 5) throw std::invalid_argument("GaitSpec: v must be >= 5");
    if (!(tf_min > 0.0 && tf_min < tf_max) || !std::isfinite(tf_max)) {
      throw std::invalid_argument("GaitSpec: t_f bounds must satisfy 0 < min < max");
    }
    params.validate();
  }

  bool operator==(const GaitSpec&) const = default;
};

struct Layout {
  int v = 0;
  int n() const { return 5 * v + 1; }
  int x(int k, int i) const { return 4 * k + i; }  // k = 0 .. v-1
  int u(int k) const { return 4 * v + k; }
  int tf() const { return 5 * v; }
  int m_defect() const { return 4 * (v - 1); }
  int m_eq() const { return m_defect() + 6; }
  int m_in() const { return 3 * v; }
};

/// Node values of one step.
struct Trajectory {
  std::vector<SwingState> states;
  std::vector<double> inputs;
  double t_f = 0.0;

  int nodes() const { return static_cast<int>(states.size()); }
  double time(int k) const { return t_f * k / (nodes() - 1); }
  bool operator==(const Trajectory&) const = default;
};

inline Vec pack(const Trajectory& tr) {
  const Layout L{tr.nodes()};
  if (static_cast<int>(tr.inputs.size()) != L.v) throw std::invalid_argument("pack: inputs/states size mismatch");
  Vec z(L.n());
  for (int k = 0; k < L.v; ++k) {
    z.segment<4>(L.x(k, 0)) = tr.states[k];
    z(L.u(k)) = tr.inputs[k];
  }
  z(L.tf()) = tr.t_f;
  return z;
}

inline Trajectory unpack(const Vec& z) {
  if (z.size() < 26 || (z.size() - 1) % 5 != 0) throw std::invalid_argument("unpack: length is not 5v+1");
  const Layout L{static_cast<int>((z.size() - 1) / 5)};
  Trajectory tr;
  tr.states.resize(L.v);
  tr.inputs.resize(L.v);
  for (int k = 0; k < L.v; ++k) {
    tr.states[k] = z.segment<4>(L.x(k, 0));
    tr.inputs[k] = z(L.u(k));
  }
  tr.t_f = z(L.tf());
  return tr;
}

/// Piecewise-linear resampling onto v uniformly spaced nodes.
inline Trajectory resample(const Trajectory& tr, int v) {
  if (v == tr.nodes()) return tr;
  Trajectory out;
  out.t_f = tr.t_f;
  out.states.resize(v);
  out.inputs.resize(v);
  const int last = tr.nodes() - 1;
  for (int k = 0; k < v; ++k) {
    const double s = static_cast<double>(k) * last / (v - 1);
    const int i = std::min(static_cast<int>(s), last - 1);
    const double w = s - i;
    out.states[k] = (1.0 - w) * tr.states[i] + w * tr.states[i + 1];
    out.inputs[k] = (1.0 - w) * tr.inputs[i] + w * tr.inputs[i + 1];
  }
  return out;
}

// Start/end states of the stock initial guess.
inline const SwingState kGuessStart(-0.17, 0.34, 1.44, 0.53);
inline const SwingState kGuessEnd(-0.34, -0.17, 1.66, -3.25);

/// Stock guess: states linear between kGuessStart and kGuessEnd, zero
/// torque, t_f at the middle of its bounds. A warm start is copied
/// (resampled if its node count differs).
inline Vec initial_guess(const GaitSpec& spec, const std::optional<Trajectory>& warm = std::nullopt) {
  if (warm) return pack(resample(*warm, spec.v));
  Trajectory tr;
  tr.t_f = 0.5 * (spec.tf_min + spec.tf_max);
  for (int k = 0; k < spec.v; ++k) {
    const double w = static_cast<double>(k) / (spec.v - 1);
    tr.states.push_back((1.0 - w) * kGuessStart + w * kGuessEnd);
    tr.inputs.push_back(0.0);
  }
  return pack(tr);
}

/// Guess built from the requested step: legs swap from (-a, a) to (a, -a)
/// with a = asin(TL / 2r) at constant rates over a step of duration t_f.
inline Vec stride_guess(const GaitSpec& spec, double t_f = 0.6) {
  const double a = std::asin(std::clamp(spec.TL / (2.0 * spec.params.leg_length), 0.0, 0.99));
  t_f = std::clamp(t_f, spec.tf_min, spec.tf_max);
  const SwingState x0(-a, a, 2.0 * a / t_f, -2.0 * a / t_f);
  const SwingState xf(a, -a, 2.0 * a / t_f, -2.0 * a / t_f);
  Trajectory tr;
  tr.t_f = t_f;
  for (int k = 0; k < spec.v; ++k) {
    const double w = static_cast<double>(k) / (spec.v - 1);
    tr.states.push_back((1.0 - w) * x0 + w * xf);
    tr.inputs.push_back(0.0);
  }
  return pack(tr);
}

/// x_{k+1} - x_k - (h/2)(f_{k+1} + f_k), stacked by interval, for any field
/// f(x, u) over the z layout. Templated on the scalar so derivatives can be
/// checked by complex step.
template <typename T, typename F>
Eigen::Matrix<T, Eigen::Dynamic, 1> trapezoid_defects(const Eigen::Matrix<T, Eigen::Dynamic, 1>& z, int v, F&& f) {
  const Layout L{v};
  const T h = z(L.tf()) / double(L.v - 1);
  Eigen::Matrix<T, Eigen::Dynamic, 1> r(L.m_defect());
  Vec4<T> x_prev = z.template segment<4>(L.x(0, 0));
  Vec4<T> f_prev = f(x_prev, z(L.u(0)));
  for (int k = 0; k + 1 < L.v; ++k) {
    const Vec4<T> x_next = z.template segment<4>(L.x(k + 1, 0));
    const Vec4<T> f_next = f(x_next, z(L.u(k + 1)));
    r.template segment<4>(4 * k) = x_next - x_prev - (h / 2.0) * (f_next + f_prev);
    x_prev = x_next;
    f_prev = f_next;
  }
  return r;
}

template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, 1> defect_constraints(const Eigen::Matrix<T, Eigen::Dynamic, 1>& z,
                                                       const GaitSpec& spec) {
  return trapezoid_defects<T>(z, spec.v, [&](const Vec4<T>& x, const T& u) {
    return swing_dynamics<T>(x, u, spec.params);
  });
}

inline Vec defect_constraints(const Vec& z, const GaitSpec& spec) { return defect_constraints<double>(z, spec); }

/// Per node k, in newtons: [1 - F_N, F_T - mu F_N, -F_T - mu F_N] (<= 0).
inline Vec path_constraints(const Vec& z, const GaitSpec& spec) {
  constexpr double kNormalMargin = 1.0;  // N
  const Layout L{spec.v};
  Vec c(L.m_in());
  for (int k = 0; k < L.v; ++k) {
    const GroundForces F = stance_grf(SwingState(z.segment<4>(L.x(k, 0))), z(L.u(k)), spec.params);
    c(3 * k) = kNormalMargin - F.F_N;
    c(3 * k + 1) = F.F_T - spec.params.friction_mu * F.F_N;
    c(3 * k + 2) = -F.F_T - spec.params.friction_mu * F.F_N;
  }
  return c;
}

/// [step length - TL, final foot height, x_1 - Delta(x_v)].
inline Vec boundary_constraints(const Vec& z, const GaitSpec& spec) {
  const Layout L{spec.v};
  const SwingState xf = z.segment<4>(L.x(L.v - 1, 0));
  Vec r(6);
  r(0) = step_length(xf, spec.params) - spec.TL;
  r(1) = foot_height(xf, spec.params);
  r.tail<4>() = z.segment<4>(L.x(0, 0)) - impact_map(xf, spec.params).x_plus;
  return r;
}

/// Trapezoid quadrature of the running cost over the grid.
inline double cost(const Vec& z, const GaitSpec& spec) {
  const Layout L{spec.v};
  const double t_f = z(L.tf());
  if (spec.cost == CostMode::Constant) return 100.0 * t_f;
  double sum = 0.0;
  for (int k = 0; k < L.v; ++k) {
    double g = 0.0;
    switch (spec.cost) {
      case CostMode::SwingAngle: g = z(L.x(k, kQsw)); break;
      case CostMode::SwingRateSquared: g = z(L.x(k, kQdSw)) * z(L.x(k, kQdSw)); break;
      case CostMode::TorqueSquared: g = z(L.u(k)) * z(L.u(k)); break;
      case CostMode::Constant: break;
    }
    sum += (k == 0 || k == L.v - 1) ? 0.5 * g : g;
  }
  return sum * t_f / (L.v - 1);
}

inline Vec equality_constraints(const Vec& z, const GaitSpec& spec) {
  const Layout L{spec.v};
  Vec c(L.m_eq());
  c << defect_constraints(z, spec), boundary_constraints(z, spec);
  return c;
}

/// Box bounds on z from the model limits and the t_f interval.
inline void decision_bounds(const GaitSpec& spec, Vec& lo, Vec& hi) {
  const Layout L{spec.v};
  const ModelParams& p = spec.params;
  lo.resize(L.n());
  hi.resize(L.n());
  for (int k = 0; k < L.v; ++k) {
    lo.segment<4>(L.x(k, 0)) << p.q_min, p.q_min, p.qd_min, p.qd_min;
    hi.segment<4>(L.x(k, 0)) << p.q_max, p.q_max, p.qd_max, p.qd_max;
    lo(L.u(k)) = p.torque_min;
    hi(L.u(k)) = p.torque_max;
  }
  lo(L.tf()) = spec.tf_min;
  hi(L.tf()) = spec.tf_max;
}

inline constexpr double kTranscriptionFdStep = 1e-7;

enum class Derivatives {
  ComplexStep,        // exact to rounding, node-local sparsity exploited
  ForwardDifference,  // dense forward differences, step 1e-7 max(1, |z_j|)
};

namespace detail {

using Cplx = std::complex<double>;
inline constexpr double kComplexStep = 1e-30;

// d g(w) / d w for w in R^k by complex step, g: C^k -> C^r.
template <int K, typename G>
Mat complex_step_jacobian(const Eigen::Matrix<double, K, 1>& w, G&& g) {
  Eigen::Matrix<Cplx, K, 1> wc = w.template cast<Cplx>();
  Mat J;
  for (int j = 0; j < K; ++j) {
    wc(j) += Cplx(0.0, kComplexStep);
    const auto col = g(wc);
    if (j == 0) J.resize(col.size(), K);
    for (Eigen::Index i = 0; i < col.size(); ++i) J(i, j) = col(i).imag() / kComplexStep;
    wc(j) = w(j);
  }
  return J;
}

inline Eigen::Matrix<double, 5, 1> node_vars(const Vec& z, const Layout& L, int k) {
  Eigen::Matrix<double, 5, 1> w;
  w << z.segment<4>(L.x(k, 0)), z(L.u(k));
  return w;
}

}  // namespace detail

namespace detail {

// Hessian of a^T g(w) by central differences of complex-step gradients.
template <int K, typename G>
Eigen::Matrix<double, K, K> weighted_hessian(const Eigen::Matrix<double, K, 1>& w, const Vec& a, G&& g) {
  auto grad = [&](const Eigen::Matrix<double, K, 1>& x) {
    return Eigen::Matrix<double, K, 1>(complex_step_jacobian<K>(x, g).transpose() * a);
  };
  Eigen::Matrix<double, K, K> H;
  for (int j = 0; j < K; ++j) {
    const double h = 1e-5 * std::max(1.0, std::abs(w(j)));
    Eigen::Matrix<double, K, 1> xp = w, xm = w;
    xp(j) += h;
    xm(j) -= h;
    H.col(j) = (grad(xp) - grad(xm)) / (xp(j) - xm(j));
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace detail

/// Jacobian of equality_constraints, exploiting that defect rows touch only
/// adjacent nodes and t_f.
inline Mat equality_jacobian(const Vec& z, const GaitSpec& spec) {
  using detail::Cplx;
  const Layout L{spec.v};
  const ModelParams& p = spec.params;
  const double h = z(L.tf()) / (L.v - 1);
  std::vector<Mat> Fk(L.v);
  std::vector<Eigen::Vector4d> fk(L.v);
  for (int k = 0; k < L.v; ++k) {
    const auto w = detail::node_vars(z, L, k);
    Fk[k] = detail::complex_step_jacobian<5>(w, [&](const Eigen::Matrix<Cplx, 5, 1>& wc) {
      return swing_dynamics<Cplx>(Vec4<Cplx>(wc.head<4>()), wc(4), p);
    });
    fk[k] = swing_dynamics(SwingState(w.head<4>()), w(4), p);
  }
  Mat J = Mat::Zero(L.m_eq(), L.n());
  const Eigen::Matrix4d I = Eigen::Matrix4d::Identity();
  for (int k = 0; k + 1 < L.v; ++k) {
    const int row = 4 * k;
    J.block<4, 4>(row, L.x(k, 0)) = -I - 0.5 * h * Fk[k].leftCols<4>();
    J.block<4, 4>(row, L.x(k + 1, 0)) = I - 0.5 * h * Fk[k + 1].leftCols<4>();
    J.block<4, 1>(row, L.u(k)) = -0.5 * h * Fk[k].col(4);
    J.block<4, 1>(row, L.u(k + 1)) = -0.5 * h * Fk[k + 1].col(4);
    J.block<4, 1>(row, L.tf()) = -0.5 / (L.v - 1) * (fk[k] + fk[k + 1]);
  }
  const int b = L.m_defect();
  const int last = L.x(L.v - 1, 0);
  const double r = p.leg_length, qst = z(last + kQst), qsw = z(last + kQsw);
  J(b, last + kQst) = r * std::cos(qst);
  J(b, last + kQsw) = -r * std::cos(qsw);
  J(b + 1, last + kQst) = -r * std::sin(qst);
  J(b + 1, last + kQsw) = r * std::sin(qsw);
  J.block<4, 4>(b + 2, L.x(0, 0)) = I;
  const Eigen::Vector4d xf = z.segment<4>(last);
  J.block<4, 4>(b + 2, last) = -detail::complex_step_jacobian<4>(
      xf, [&](const Vec4<Cplx>& xc) { return reset_state<Cplx>(xc, p); });
  return J;
}

/// Jacobian of path_constraints (newtons).
inline Mat path_jacobian(const Vec& z, const GaitSpec& spec) {
  using detail::Cplx;
  const Layout L{spec.v};
  const ModelParams& p = spec.params;
  Mat J = Mat::Zero(L.m_in(), L.n());
  for (int k = 0; k < L.v; ++k) {
    const Mat dF = detail::complex_step_jacobian<5>(detail::node_vars(z, L, k), [&](const Eigen::Matrix<Cplx, 5, 1>& wc) {
      return stance_force<Cplx>(Vec4<Cplx>(wc.head<4>()), wc(4), p);
    });
    const Eigen::Matrix<double, 1, 5> dT = dF.row(0), dN = dF.row(1);
    const Eigen::Matrix<double, 1, 5> rows[3] = {-dN, dT - p.friction_mu * dN, -dT - p.friction_mu * dN};
    for (int i = 0; i < 3; ++i) {
      J.block<1, 4>(3 * k + i, L.x(k, 0)) = rows[i].head<4>();
      J(3 * k + i, L.u(k)) = rows[i](4);
    }
  }
  return J;
}

inline Vec cost_gradient(const Vec& z, const GaitSpec& spec) {
  const Layout L{spec.v};
  Vec g = Vec::Zero(L.n());
  const double t_f = z(L.tf());
  if (spec.cost == CostMode::Constant) {
    g(L.tf()) = 100.0;
    return g;
  }
  const double dt = t_f / (L.v - 1);
  double sum = 0.0;
  for (int k = 0; k < L.v; ++k) {
    const double w = (k == 0 || k == L.v - 1) ? 0.5 : 1.0;
    switch (spec.cost) {
      case CostMode::SwingAngle: {
        const double q = z(L.x(k, kQsw));
        sum += w * q;
        g(L.x(k, kQsw)) = w * dt;
        break;
      }
      case CostMode::SwingRateSquared: {
        const double qd = z(L.x(k, kQdSw));
        sum += w * qd * qd;
        g(L.x(k, kQdSw)) = 2.0 * w * qd * dt;
        break;
      }
      case CostMode::TorqueSquared: {
        const double u = z(L.u(k));
        sum += w * u * u;
        g(L.u(k)) = 2.0 * w * u * dt;
        break;
      }
      case CostMode::Constant: break;
    }
  }
  g(L.tf()) = sum / (L.v - 1);
  return g;
}

/// Hessian of sigma J + lambda^T c_eq + mu^T (c_path / 2mg).
inline Mat lagrangian_hessian(const Vec& z, const GaitSpec& spec, double sigma, const Vec& lambda, const Vec& mu) {
  using detail::Cplx;
  const Layout L{spec.v};
  const ModelParams& p = spec.params;
  const double weight = 2.0 * p.mass * p.gravity;
  const double c = 1.0 / (L.v - 1);
  const double t_f = z(L.tf());
  const double h = t_f * c;
  Mat H = Mat::Zero(L.n(), L.n());
  auto add_node = [&](int k, const Eigen::Matrix<double, 5, 5>& B) {
    for (int i = 0; i < 5; ++i) {
      const int ri = i < 4 ? L.x(k, i) : L.u(k);
      for (int j = 0; j < 5; ++j) H(ri, j < 4 ? L.x(k, j) : L.u(k)) += B(i, j);
    }
  };
  for (int k = 0; k < L.v; ++k) {
    const auto w = detail::node_vars(z, L, k);
    // defects: -(t_f c / 2) a_k^T f(w_k) with a_k the multipliers of both adjacent intervals
    Vec a = Vec::Zero(4);
    if (k > 0) a += lambda.segment<4>(4 * (k - 1));
    if (k + 1 < L.v) a += lambda.segment<4>(4 * k);
    auto dyn = [&](const Eigen::Matrix<Cplx, 5, 1>& wc) {
      return swing_dynamics<Cplx>(Vec4<Cplx>(wc.head<4>()), wc(4), p);
    };
    if (a.cwiseAbs().maxCoeff() > 0.0) {
      add_node(k, -0.5 * h * detail::weighted_hessian<5>(w, a, dyn));
      const Eigen::Matrix<double, 5, 1> ga = detail::complex_step_jacobian<5>(w, dyn).transpose() * a;
      for (int i = 0; i < 5; ++i) {
        const int ri = i < 4 ? L.x(k, i) : L.u(k);
        H(ri, L.tf()) += -0.5 * c * ga(i);
        H(L.tf(), ri) += -0.5 * c * ga(i);
      }
    }
    // path rows: b_T F_T + b_N F_N
    const double m0 = mu(3 * k), m1 = mu(3 * k + 1), m2 = mu(3 * k + 2);
    Vec b(2);
    b << (m1 - m2) / weight, (-m0 - p.friction_mu * (m1 + m2)) / weight;
    if (b.cwiseAbs().maxCoeff() > 0.0) {
      add_node(k, detail::weighted_hessian<5>(w, b, [&](const Eigen::Matrix<Cplx, 5, 1>& wc) {
        return stance_force<Cplx>(Vec4<Cplx>(wc.head<4>()), wc(4), p);
      }));
    }
  }
  // boundary rows
  const int b = L.m_defect();
  const int last = L.x(L.v - 1, 0);
  const double r = p.leg_length, qst = z(last + kQst), qsw = z(last + kQsw);
  H(last + kQst, last + kQst) += -r * std::sin(qst) * lambda(b) - r * std::cos(qst) * lambda(b + 1);
  H(last + kQsw, last + kQsw) += r * std::sin(qsw) * lambda(b) + r * std::cos(qsw) * lambda(b + 1);
  const Vec lp = lambda.segment<4>(b + 2);
  if (lp.cwiseAbs().maxCoeff() > 0.0) {
    const Eigen::Vector4d xf = z.segment<4>(last);
    H.block<4, 4>(last, last) -=
        detail::weighted_hessian<4>(xf, lp, [&](const Vec4<Cplx>& xc) { return reset_state<Cplx>(xc, p); });
  }
  // cost
  if (sigma != 0.0 && spec.cost != CostMode::Constant) {
    for (int k = 0; k < L.v; ++k) {
      const double wk = (k == 0 || k == L.v - 1) ? 0.5 : 1.0;
      int idx = -1;
      switch (spec.cost) {
        case CostMode::SwingAngle: idx = L.x(k, kQsw); break;
        case CostMode::SwingRateSquared: idx = L.x(k, kQdSw); break;
        case CostMode::TorqueSquared: idx = L.u(k); break;
        case CostMode::Constant: break;
      }
      if (spec.cost == CostMode::SwingAngle) {
        H(idx, L.tf()) += sigma * c * wk;
        H(L.tf(), idx) += sigma * c * wk;
      } else {
        H(idx, idx) += 2.0 * sigma * c * t_f * wk;
        H(idx, L.tf()) += 2.0 * sigma * c * wk * z(idx);
        H(L.tf(), idx) += 2.0 * sigma * c * wk * z(idx);
      }
    }
  }
  return H;
}

/// The NLP of one step. Path rows are divided by the total weight 2mg so
/// all constraint rows are O(1).
inline NlpProblem assemble(const GaitSpec& spec, Derivatives d = Derivatives::ComplexStep) {
  spec.validate();
  const Layout L{spec.v};
  const double weight = 2.0 * spec.params.mass * spec.params.gravity;
  NlpProblem P;
  P.n = L.n();
  P.m_eq = L.m_eq();
  P.m_in = L.m_in();
  P.objective = [spec](const Vec& z) { return cost(z, spec); };
  P.eq = [spec](const Vec& z) { return equality_constraints(z, spec); };
  P.ineq = [spec, weight](const Vec& z) { return Vec(path_constraints(z, spec) / weight); };
  decision_bounds(spec, P.lower, P.upper);
  if (d == Derivatives::ComplexStep) {
    P.gradient = [spec](const Vec& z) { return cost_gradient(z, spec); };
    P.jac_eq = [spec](const Vec& z) { return equality_jacobian(z, spec); };
    P.jac_ineq = [spec, weight](const Vec& z) { return Mat(path_jacobian(z, spec) / weight); };
    P.hessian = [spec](const Vec& z, double sigma, const Vec& lambda, const Vec& mu) {
      return lagrangian_hessian(z, spec, sigma, lambda, mu);
    };
    return P;
  }
  const Vec lo = P.lower, hi = P.upper;
  P.gradient = [spec, lo, hi](const Vec& z) {
    auto f = [&](const Vec& x) { return Vec::Constant(1, cost(x, spec)); };
    return Vec(detail::fd_jacobian(f, z, f(z), lo, hi, kTranscriptionFdStep).row(0).transpose());
  };
  P.jac_eq = [spec, lo, hi](const Vec& z) {
    auto f = [&](const Vec& x) { return equality_constraints(x, spec); };
    return detail::fd_jacobian(f, z, f(z), lo, hi, kTranscriptionFdStep);
  };
  P.jac_ineq = [spec, lo, hi, weight](const Vec& z) {
    auto f = [&](const Vec& x) { return Vec(path_constraints(x, spec) / weight); };
    return detail::fd_jacobian(f, z, f(z), lo, hi, kTranscriptionFdStep);
  };
  return P;
}

}  // namespace gaitforge
