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

// Closed-form mechanics of the planar compass-gait biped.
//
// Angles are measured from the upward vertical along the foot-to-hip
// direction of each leg, so with the stance foot at the origin
//
//   hip        = r (sin q_st, cos q_st)
//   swing foot = hip - r (sin q_sw, cos q_sw)
//
// and relabeling at impact is a plain swap of the two legs. Each leg carries
// a point mass m at its midpoint. The swing-phase functions are templated on
// the scalar so they can be evaluated with complex numbers.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "gaitforge/model_params.hpp"

namespace gaitforge {

template <typename T>
using Vec2 = Eigen::Matrix<T, 2, 1>;
template <typename T>
using Vec4 = Eigen::Matrix<T, 4, 1>;
template <typename T>
using Mat2 = Eigen::Matrix<T, 2, 2>;
template <typename T>
using Mat4 = Eigen::Matrix<T, 4, 4>;

/// x_s = [q_st, q_sw, qd_st, qd_sw].
using SwingState = Eigen::Vector4d;

enum StateIndex : int { kQst = 0, kQsw = 1, kQdSt = 2, kQdSw = 3 };

class SingularImpact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
struct SwingTerms {
  Mat2<T> D;  // inertia
  Mat2<T> C;  // Coriolis and centrifugal
  Vec2<T> G;  // gravity
};

template <typename T>
struct ExtendedTerms {
  Mat4<T> D;
  Mat4<T> C;
  Vec4<T> G;
};

struct ImpactResult {
  SwingState x_plus = SwingState::Zero();  // relabeled: new stance, new swing
  double impulse_T = 0.0;                  // N s, along +x at the impacting foot
  double impulse_N = 0.0;                  // N s, along +y
  Eigen::Vector4d qd_e_plus = Eigen::Vector4d::Zero();  // before relabeling
};

struct GroundForces {
  double F_T = 0.0;
  double F_N = 0.0;
  bool operator==(const GroundForces&) const = default;
};

struct FootKinematics {
  Eigen::Vector2d position;               // relative to the stance foot
  Eigen::Matrix<double, 2, 4> jacobian;   // d p_sw / d q_e
};

struct Energy {
  double kinetic = 0.0;
  double potential = 0.0;
  double total() const { return kinetic + potential; }
};

template <typename T>
SwingTerms<T> swing_terms(const Vec2<T>& q, const Vec2<T>& qd, const ModelParams& p) {
  using std::cos;
  using std::sin;
  const double m = p.mass, r = p.leg_length, g = p.gravity;
  const double mr2 = m * r * r;
  const T c12 = cos(q(0) - q(1));
  const T s12 = sin(q(0) - q(1));
  SwingTerms<T> t;
  t.D(0, 0) = T(1.25 * mr2);
  t.D(0, 1) = -0.5 * mr2 * c12;
  t.D(1, 0) = t.D(0, 1);
  t.D(1, 1) = T(0.25 * mr2);
  t.C(0, 0) = T(0.0);
  t.C(0, 1) = -0.5 * mr2 * qd(1) * s12;
  t.C(1, 0) = 0.5 * mr2 * qd(0) * s12;
  t.C(1, 1) = T(0.0);
  t.G(0) = -1.5 * m * g * r * sin(q(0));
  t.G(1) = 0.5 * m * g * r * sin(q(1));
  return t;
}

/// Joint accelerations for hip torque u acting on the swing coordinate.
template <typename T>
Vec2<T> swing_accelerations(const Vec4<T>& x, const T& u, const ModelParams& p) {
  const Vec2<T> q(x(kQst), x(kQsw));
  const Vec2<T> qd(x(kQdSt), x(kQdSw));
  const SwingTerms<T> t = swing_terms<T>(q, qd, p);
  Vec2<T> rhs = -t.C * qd - t.G;
  rhs(1) += u;
  // det D = (m^2 r^4 / 16)(5 - 4 c12^2) > 0
  const T det = t.D(0, 0) * t.D(1, 1) - t.D(0, 1) * t.D(1, 0);
  return Vec2<T>((t.D(1, 1) * rhs(0) - t.D(0, 1) * rhs(1)) / det,
                 (t.D(0, 0) * rhs(1) - t.D(1, 0) * rhs(0)) / det);
}

template <typename T>
Vec4<T> swing_dynamics(const Vec4<T>& x, const T& u, const ModelParams& p) {
  const Vec2<T> qdd = swing_accelerations<T>(x, u, p);
  return Vec4<T>(x(kQdSt), x(kQdSw), qdd(0), qdd(1));
}

inline Eigen::Vector4d swing_dynamics(const SwingState& x, double u, const ModelParams& p) {
  return swing_dynamics<double>(x, u, p);
}

/// Terms of the double-support model in q_e = [q_st, q_sw, p_x, p_y], where
/// (p_x, p_y) is the stance-foot position treated as a free base point.
template <typename T>
ExtendedTerms<T> extended_terms(const Vec4<T>& q_e, const Vec4<T>& qd_e, const ModelParams& p) {
  using std::cos;
  using std::sin;
  const double m = p.mass, r = p.leg_length, g = p.gravity;
  const SwingTerms<T> s = swing_terms<T>(Vec2<T>(q_e(0), q_e(1)), Vec2<T>(qd_e(0), qd_e(1)), p);
  const T cst = cos(q_e(0)), sst = sin(q_e(0));
  const T csw = cos(q_e(1)), ssw = sin(q_e(1));

  ExtendedTerms<T> e;
  e.D.setZero();
  e.D.template topLeftCorner<2, 2>() = s.D;
  Mat2<T> d12;
  d12 << 1.5 * m * r * cst, -1.5 * m * r * sst,
         -0.5 * m * r * csw, 0.5 * m * r * ssw;
  e.D.template topRightCorner<2, 2>() = d12;
  e.D.template bottomLeftCorner<2, 2>() = d12.transpose();
  e.D(2, 2) = T(2.0 * m);
  e.D(3, 3) = T(2.0 * m);

  e.C.setZero();
  e.C.template topLeftCorner<2, 2>() = s.C;
  e.C(2, 0) = -1.5 * m * r * qd_e(0) * sst;
  e.C(2, 1) = 0.5 * m * r * qd_e(1) * ssw;
  e.C(3, 0) = -1.5 * m * r * qd_e(0) * cst;
  e.C(3, 1) = 0.5 * m * r * qd_e(1) * csw;

  e.G << s.G(0), s.G(1), T(0.0), T(2.0 * m * g);
  return e;
}

inline FootKinematics swing_foot_kinematics(const Eigen::Vector2d& q, const ModelParams& p) {
  const double r = p.leg_length;
  FootKinematics k;
  k.position << r * (std::sin(q(0)) - std::sin(q(1))), r * (std::cos(q(0)) - std::cos(q(1)));
  k.jacobian << r * std::cos(q(0)), -r * std::cos(q(1)), 1.0, 0.0,
               -r * std::sin(q(0)), r * std::sin(q(1)), 0.0, 1.0;
  return k;
}

inline double step_length(const SwingState& x, const ModelParams& p) {
  return p.leg_length * (std::sin(x(kQst)) - std::sin(x(kQsw)));
}

inline double foot_height(const SwingState& x, const ModelParams& p) {
  return p.leg_length * (std::cos(x(kQst)) - std::cos(x(kQsw)));
}

/// Reflection through the vertical plane at the stance foot.
inline SwingState mirror(const SwingState& x) { return -x; }

/// Block system [[D_e, -E^T], [E, 0]] [qd_e+; F] = [D_e qd_e-; 0] of a plastic
/// swing-foot impact, stance foot at the origin and at rest before impact.
template <typename T>
struct ImpactSystem {
  Eigen::Matrix<T, 6, 6> A;
  Eigen::Matrix<T, 6, 1> rhs;
};

template <typename T>
ImpactSystem<T> impact_system(const Vec4<T>& x_minus, const ModelParams& p) {
  using std::cos;
  using std::sin;
  const double r = p.leg_length;
  const Vec4<T> q_e(x_minus(kQst), x_minus(kQsw), T(0.0), T(0.0));
  const Vec4<T> qd_minus(x_minus(kQdSt), x_minus(kQdSw), T(0.0), T(0.0));
  const ExtendedTerms<T> ext = extended_terms<T>(q_e, qd_minus, p);
  Eigen::Matrix<T, 2, 4> E;
  E << r * cos(q_e(0)), -r * cos(q_e(1)), T(1.0), T(0.0),
       -r * sin(q_e(0)), r * sin(q_e(1)), T(0.0), T(1.0);
  ImpactSystem<T> sys;
  sys.A.setZero();
  sys.A.template topLeftCorner<4, 4>() = ext.D;
  sys.A.template topRightCorner<4, 2>() = -E.transpose();
  sys.A.template bottomLeftCorner<2, 4>() = E;
  sys.rhs.setZero();
  sys.rhs.template head<4>() = ext.D * qd_minus;
  return sys;
}

/// Post-impact relabeled state without the conditioning check; usable with
/// complex scalars for derivative checks.
template <typename T>
Vec4<T> reset_state(const Vec4<T>& x_minus, const ModelParams& p) {
  const ImpactSystem<T> sys = impact_system<T>(x_minus, p);
  const Eigen::Matrix<T, 6, 1> sol = sys.A.partialPivLu().solve(sys.rhs);
  return Vec4<T>(x_minus(kQsw), x_minus(kQst), sol(1), sol(0));
}

/// Plastic impact of the swing foot followed by leg relabeling (positions
/// and rates).
inline ImpactResult impact_map(const SwingState& x_minus, const ModelParams& p) {
  if (!x_minus.allFinite()) throw std::invalid_argument("impact_map: non-finite state");
  const ImpactSystem<double> sys = impact_system<double>(x_minus, p);
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(sys.A);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(5);
  if (!(cond <= 1e12)) {
    throw SingularImpact("impact_map: block matrix condition number " + std::to_string(cond));
  }
  const Eigen::Matrix<double, 6, 1> sol = sys.A.partialPivLu().solve(sys.rhs);

  ImpactResult out;
  out.qd_e_plus = sol.head<4>();
  out.impulse_T = sol(4);
  out.impulse_N = sol(5);
  out.x_plus << x_minus(kQsw), x_minus(kQst), sol(1), sol(0);
  return out;
}

/// Stance-foot reaction (F_T, F_N) from the momentum balance of both point
/// masses: F = m (a_1 + a_2) + (0, 2 m g).
template <typename T>
Vec2<T> stance_force(const Vec4<T>& x, const T& u, const ModelParams& p) {
  using std::cos;
  using std::sin;
  const double m = p.mass, r = p.leg_length, g = p.gravity;
  const Vec2<T> qdd = swing_accelerations<T>(x, u, p);
  // second derivative of k (sin a, cos a)
  auto accel = [](double k, const T& a, const T& w, const T& alpha) {
    return Vec2<T>(k * (alpha * cos(a) - w * w * sin(a)), k * (-alpha * sin(a) - w * w * cos(a)));
  };
  const Vec2<T> a_st = accel(1.5 * r, x(kQst), x(kQdSt), qdd(0));
  const Vec2<T> a_sw = accel(0.5 * r, x(kQsw), x(kQdSw), qdd(1));
  Vec2<T> F = m * (a_st - a_sw);
  F(1) += 2.0 * m * g;
  return F;
}

inline GroundForces stance_grf(const SwingState& x, double u, const ModelParams& p) {
  const Eigen::Vector2d F = stance_force<double>(x, u, p);
  return {F(0), F(1)};
}

inline Energy mechanical_energy(const SwingState& x, const ModelParams& p) {
  const Eigen::Vector2d q = x.head<2>(), qd = x.tail<2>();
  const SwingTerms<double> t = swing_terms<double>(q, qd, p);
  const double mgr = p.mass * p.gravity * p.leg_length;
  return {0.5 * qd.dot(t.D * qd), 1.5 * mgr * std::cos(q(0)) - 0.5 * mgr * std::cos(q(1))};
}

}  // namespace gaitforge
