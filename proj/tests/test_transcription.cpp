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

#include "gaitforge/transcription.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gaitforge/nlp.hpp"
#include "oracles.hpp"

namespace gaitforge {
namespace {

GaitSpec spec_with(int v, CostMode cost = CostMode::TorqueSquared, double TL = 0.5) {
  GaitSpec s;
  s.v = v;
  s.cost = cost;
  s.TL = TL;
  return s;
}

Vec random_z(const GaitSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> q(-0.6, 0.6), w(-3.0, 3.0), u(-5.0, 5.0), tf(0.4, 1.2);
  const Layout L{spec.v};
  Vec z(L.n());
  for (int k = 0; k < L.v; ++k) {
    z.segment<4>(L.x(k, 0)) << q(rng), q(rng), w(rng), w(rng);
    z(L.u(k)) = u(rng);
  }
  z(L.tf()) = tf(rng);
  return z;
}

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Central differences of a vector function, columnwise.
template <typename F>
Mat central_jacobian(F&& f, const Vec& z, double h = 1e-6) {
  const Vec f0 = f(z);
  Mat J(f0.size(), z.size());
  for (int j = 0; j < z.size(); ++j) {
    Vec zp = z, zm = z;
    zp(j) += h;
    zm(j) -= h;
    J.col(j) = (f(zp) - f(zm)) / (2.0 * h);
  }
  return J;
}

double scaled_err(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

TEST(Layout, CountsForDefaultGrid) {
  const Layout L{25};
  EXPECT_EQ(L.n(), 126);
  EXPECT_EQ(L.m_eq(), 4 * 24 + 6);
  EXPECT_EQ(L.m_in(), 75);
  const NlpProblem P = assemble(spec_with(25));
  EXPECT_EQ(P.n, 126);
  EXPECT_EQ(P.m_eq, 102);
  EXPECT_EQ(P.m_in, 75);
}

TEST(InitialGuess, FiveNodesInterpolateAnchors) {
  const GaitSpec s = spec_with(5);
  const Vec z = initial_guess(s);
  ASSERT_EQ(z.size(), 26);
  const Trajectory tr = unpack(z);
  const SwingState mid(-0.255, 0.085, 1.55, -1.36);
  EXPECT_LE((tr.states[2] - mid).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(tr.states.front(), kGuessStart);
  EXPECT_EQ(tr.states.back(), kGuessEnd);
  for (double u : tr.inputs) EXPECT_EQ(u, 0.0);
  EXPECT_DOUBLE_EQ(tr.t_f, 0.5 * (s.tf_min + s.tf_max));
}

TEST(InitialGuess, WarmStartIsCopiedExactly) {
  const GaitSpec s = spec_with(9);
  const Vec z = random_z(s, 3);
  EXPECT_EQ(initial_guess(s, unpack(z)), z);
}

TEST(InitialGuess, WarmStartFromOtherGridKeepsEnds) {
  const Vec z = random_z(spec_with(9), 4);
  const Trajectory src = unpack(z);
  const Trajectory dst = unpack(initial_guess(spec_with(17), src));
  ASSERT_EQ(dst.nodes(), 17);
  EXPECT_EQ(dst.states.front(), src.states.front());
  EXPECT_EQ(dst.states.back(), src.states.back());
  EXPECT_EQ(dst.states[2], src.states[1]);  // coincident node
  EXPECT_EQ(dst.t_f, src.t_f);
}

TEST(Pack, UnpackRoundTripIsExact) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Vec z = random_z(spec_with(6 + static_cast<int>(seed)), seed);
    EXPECT_EQ(pack(unpack(z)), z);
  }
  EXPECT_THROW(unpack(Vec::Zero(27)), std::invalid_argument);
}

TEST(GaitSpec, RejectsBadValues) {
  GaitSpec s;
  s.TL = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = GaitSpec{};
  s.v = 4;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = GaitSpec{};
  s.tf_min = 1.0;
  s.tf_max = 0.5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_EQ(parse_cost_mode("torque2"), CostMode::TorqueSquared);
  EXPECT_EQ(parse_cost_mode("SwingAngle"), CostMode::SwingAngle);
  EXPECT_FALSE(parse_cost_mode("fastest").has_value());
}

TEST(Defects, ExactTrapezoidStatesGiveZero) {
  const GaitSpec s = spec_with(11);
  const Layout L{s.v};
  Vec z(L.n());
  z(L.tf()) = 0.5;
  const double h = 0.5 / (L.v - 1);
  SwingState x(-0.25, 0.25, 2.7, 4.2);
  for (int k = 0; k < L.v; ++k) {
    const double u = 0.3 * k;
    z(L.u(k)) = u;
    if (k > 0) {
      // implicit trapezoid step by Newton on x+ - x - h/2 (f(x+) + f(x)) = 0
      const SwingState xk = z.segment<4>(L.x(k - 1, 0));
      const Eigen::Vector4d fk = swing_dynamics(xk, z(L.u(k - 1)), s.params);
      for (int it = 0; it < 30; ++it) {
        auto r = [&](const Vec& y) {
          return Vec(y - xk - 0.5 * h * (swing_dynamics(SwingState(y), u, s.params) + fk));
        };
        const Mat Jr = central_jacobian(r, x, 1e-7);
        x -= Jr.fullPivLu().solve(r(x));
      }
    }
    z.segment<4>(L.x(k, 0)) = x;
  }
  EXPECT_LE(max_abs(defect_constraints(z, s)), 1e-12);
}

TEST(Defects, LinearFieldIsExactForItsDiscretization) {
  const double a = -1.7, tf = 0.9;
  const int v = 8;
  const Layout L{v};
  const double h = tf / (v - 1);
  const double growth = (1.0 + 0.5 * a * h) / (1.0 - 0.5 * a * h);
  Vec z = Vec::Zero(L.n());
  z(L.tf()) = tf;
  Eigen::Vector4d x(1.0, -2.0, 0.5, 3.0);
  for (int k = 0; k < v; ++k) {
    z.segment<4>(L.x(k, 0)) = x;
    x *= growth;
  }
  const Vec r = trapezoid_defects<double>(z, v, [a](const Vec4<double>& y, double) { return Vec4<double>(a * y); });
  EXPECT_LE(max_abs(r), 1e-14);
}

TEST(Defects, MatchFirstPrinciplesField) {
  // f from the oracle's Lagrangian mass/Coriolis/gravity, hip torque on q_sw
  const GaitSpec s = spec_with(7);
  const Vec z = random_z(s, 11);
  const Layout L{s.v};
  auto field = [&](const Eigen::Vector4d& x, double u) {
    const Eigen::Vector4d q(x(0), x(1), 0.0, 0.0), qd(x(2), x(3), 0.0, 0.0);
    const Eigen::Matrix2d D = oracle::mass_matrix(q, s.params).topLeftCorner<2, 2>();
    Eigen::Vector2d rhs = -oracle::coriolis_matrix(q, qd, s.params).topLeftCorner<2, 2>() * x.tail<2>() -
                          oracle::gravity_vector(q, s.params).head<2>();
    rhs(1) += u;
    Eigen::Vector4d f;
    f << x.tail<2>(), D.inverse() * rhs;
    return f;
  };
  const double h = z(L.tf()) / (L.v - 1);
  Vec ref(L.m_defect());
  for (int k = 0; k + 1 < L.v; ++k) {
    const Eigen::Vector4d x0 = z.segment<4>(L.x(k, 0)), x1 = z.segment<4>(L.x(k + 1, 0));
    ref.segment<4>(4 * k) = x1 - x0 - 0.5 * h * (field(x1, z(L.u(k + 1))) + field(x0, z(L.u(k))));
  }
  EXPECT_LE(scaled_err(defect_constraints(z, s), ref), 1e-9);
}

TEST(Path, StaticStandHasFullWeightOnStanceFoot) {
  const GaitSpec s = spec_with(5);
  const Layout L{s.v};
  const Vec z = Vec::Zero(L.n());  // upright, at rest, no torque
  const Vec c = path_constraints(z, s);
  ASSERT_EQ(c.size(), 15);
  for (int k = 0; k < L.v; ++k) {
    EXPECT_NEAR(c(3 * k), 1.0 - 98.1, 1e-9);
    EXPECT_NEAR(c(3 * k + 1), -78.48, 1e-9);
    EXPECT_NEAR(c(3 * k + 2), -78.48, 1e-9);
  }
}

TEST(Path, ZeroNormalForceViolatesByMargin) {
  const GaitSpec s = spec_with(5);
  const Layout L{s.v};
  Vec z = random_z(s, 21);
  // F_N is affine in u; pick the torque that unloads node 2
  const SwingState x = z.segment<4>(L.x(2, 0));
  const double n0 = stance_grf(x, 0.0, s.params).F_N, n1 = stance_grf(x, 1.0, s.params).F_N;
  z(L.u(2)) = -n0 / (n1 - n0);
  const Vec c = path_constraints(z, s);
  EXPECT_NEAR(c(6), 1.0, 1e-9);
  const GroundForces F = stance_grf(x, z(L.u(2)), s.params);
  EXPECT_NEAR(c(7), F.F_T, 1e-9);
  EXPECT_NEAR(c(8), -F.F_T, 1e-9);
}

TEST(Boundary, SymmetricFinalLegsPlaceFootExactly) {
  const GaitSpec s = spec_with(6, CostMode::TorqueSquared, 0.6);
  const Layout L{s.v};
  Vec z = random_z(s, 5);
  const double a = std::asin(s.TL / (2.0 * s.params.leg_length));
  const SwingState xf(a, -a, 1.3, -2.1);
  z.segment<4>(L.x(L.v - 1, 0)) = xf;
  z.segment<4>(L.x(0, 0)) = impact_map(xf, s.params).x_plus;
  const Vec r = boundary_constraints(z, s);
  EXPECT_LE(max_abs(r), 1e-15);

  const Eigen::Vector4d delta(1e-3, -2e-3, 0.5, -0.25);
  z.segment<4>(L.x(0, 0)) += delta;
  EXPECT_LE((boundary_constraints(z, s).tail<4>() - delta).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Boundary, InitialGuessResidualIsFiniteAndNonzero) {
  const GaitSpec s = spec_with(25);
  const Vec r = boundary_constraints(initial_guess(s), s);
  ASSERT_EQ(r.size(), 6);
  EXPECT_TRUE(r.allFinite());
  EXPECT_GT(max_abs(r), 1e-3);
  // final guess node (-0.34, -0.17): step r(sin(-0.34) - sin(-0.17))
  EXPECT_NEAR(r(0), std::sin(-0.34) - std::sin(-0.17) - 0.5, 1e-15);
}

TEST(Cost, ClosedFormModes) {
  GaitSpec s = spec_with(9, CostMode::Constant);
  const Layout L{s.v};
  Vec z = random_z(s, 8);
  z(L.tf()) = 0.7;
  EXPECT_DOUBLE_EQ(cost(z, s), 70.0);

  s.cost = CostMode::TorqueSquared;
  Vec z0 = z;
  for (int k = 0; k < L.v; ++k) z0(L.u(k)) = 0.0;
  EXPECT_EQ(cost(z0, s), 0.0);
  for (int k = 0; k < L.v; ++k) z0(L.u(k)) = 3.0;
  EXPECT_NEAR(cost(z0, s), 9.0 * 0.7, 1e-12);

  // trapezoid integrates a linear q_sw(t) exactly
  s.cost = CostMode::SwingAngle;
  for (int k = 0; k < L.v; ++k) z0(L.x(k, kQsw)) = 0.4 - 0.1 * k;
  EXPECT_NEAR(cost(z0, s), 0.5 * (0.4 + (0.4 - 0.8)) * 0.7, 1e-12);

  s.cost = CostMode::SwingRateSquared;
  for (int k = 0; k < L.v; ++k) z0(L.x(k, kQdSw)) = -2.0;
  EXPECT_NEAR(cost(z0, s), 4.0 * 0.7, 1e-12);
}

class Derivative : public ::testing::TestWithParam<CostMode> {};

TEST_P(Derivative, GradientAndJacobiansMatchCentralDifferences) {
  const GaitSpec s = spec_with(7, GetParam());
  const Vec z = random_z(s, 17);
  const NlpProblem P = assemble(s);
  EXPECT_LE(scaled_err(P.gradient(z).transpose(),
                       central_jacobian([&](const Vec& x) { return Vec::Constant(1, P.objective(x)); }, z)),
            1e-7);
  EXPECT_LE(scaled_err(P.jac_eq(z), central_jacobian(P.eq, z)), 1e-7);
  EXPECT_LE(scaled_err(P.jac_ineq(z), central_jacobian(P.ineq, z)), 1e-7);
}

TEST_P(Derivative, HessianMatchesDifferencedLagrangianGradient) {
  const GaitSpec s = spec_with(6, GetParam());
  const Vec z = random_z(s, 23);
  const NlpProblem P = assemble(s);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Vec lambda(P.m_eq), mu(P.m_in);
  for (auto& l : lambda) l = nd(rng);
  for (auto& m : mu) m = std::abs(nd(rng));
  const double sigma = 0.7;
  auto grad_l = [&](const Vec& x) {
    return Vec(sigma * P.gradient(x) + P.jac_eq(x).transpose() * lambda + P.jac_ineq(x).transpose() * mu);
  };
  const Mat H = P.hessian(z, sigma, lambda, mu);
  EXPECT_LE(scaled_err(H, H.transpose()), 1e-12);
  EXPECT_LE(scaled_err(H, central_jacobian(grad_l, z, 1e-5)), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(AllCosts, Derivative, ::testing::ValuesIn(kAllCostModes),
                         [](const auto& info) { return std::string(cost_name(info.param)); });

TEST(ForwardDifference, DefectJacobianMatchesComplexStep) {
  const GaitSpec s = spec_with(25);
  const Vec z = initial_guess(s);
  const NlpProblem fd = assemble(s, Derivatives::ForwardDifference);
  const NlpProblem cs = assemble(s);
  EXPECT_FALSE(static_cast<bool>(fd.hessian));
  EXPECT_LE(scaled_err(fd.jac_eq(z), cs.jac_eq(z)), 1e-5);
  EXPECT_LE(scaled_err(fd.jac_ineq(z), cs.jac_ineq(z)), 1e-5);
}

TEST(Assemble, EvaluationIsBitIdentical) {
  const GaitSpec s = spec_with(25, CostMode::SwingRateSquared);
  const Vec z = random_z(s, 99);
  const NlpProblem a = assemble(s), b = assemble(s);
  EXPECT_EQ(a.objective(z), b.objective(z));
  EXPECT_EQ(a.eq(z), b.eq(z));
  EXPECT_EQ(a.ineq(z), a.ineq(z));
  EXPECT_EQ(a.jac_eq(z), b.jac_eq(z));
  EXPECT_EQ(a.hessian(z, 1.0, Vec::Ones(a.m_eq), Vec::Ones(a.m_in)),
            b.hessian(z, 1.0, Vec::Ones(a.m_eq), Vec::Ones(a.m_in)));
}

NlpSolution solve_gait(const GaitSpec& s) {
  const NlpSolution sol = solve(assemble(s), initial_guess(s));
  EXPECT_EQ(sol.status, SolveStatus::Converged);
  return sol;
}

TEST(ConvergedGait, ResidualAudit) {
  const GaitSpec s = spec_with(25);
  const NlpSolution sol = solve_gait(s);
  EXPECT_LE(max_abs(defect_constraints(sol.z, s)), 1e-6);
  EXPECT_LE(max_abs(boundary_constraints(sol.z, s)), 1e-6);
  const double weight = 2.0 * s.params.mass * s.params.gravity;
  EXPECT_LE(path_constraints(sol.z, s).maxCoeff(), 1e-8 * weight);
  EXPECT_LE(sol.kkt.complementarity, 1e-4);
}

TEST(ConvergedGait, RateCostAgreesWithRefinedQuadrature) {
  const GaitSpec s = spec_with(25, CostMode::SwingRateSquared);
  const NlpSolution sol = solve_gait(s);
  const Trajectory tr = unpack(sol.z);
  // Trapezoid collocation makes each state quadratic between nodes; sample
  // that interpolant ten times finer and integrate by Simpson's rule.
  // Rate-cost optima ring (torque alternating node to node), which this
  // catches: the nodal quadrature then undercounts the swing rate.
  const double h = tr.t_f / (tr.nodes() - 1);
  constexpr int kSub = 10;
  double J = 0.0;
  for (int k = 0; k + 1 < tr.nodes(); ++k) {
    const double a0 = swing_dynamics(tr.states[k], tr.inputs[k], s.params)(kQdSw);
    const double a1 = swing_dynamics(tr.states[k + 1], tr.inputs[k + 1], s.params)(kQdSw);
    auto rate = [&](double tau) { return tr.states[k](kQdSw) + a0 * tau + 0.5 * (a1 - a0) * tau * tau / h; };
    const double d = h / kSub;
    for (int j = 0; j < kSub; ++j) {
      const double r0 = rate(j * d), rm = rate((j + 0.5) * d), r1 = rate((j + 1) * d);
      J += d / 6.0 * (r0 * r0 + 4.0 * rm * rm + r1 * r1);
    }
  }
  EXPECT_LE(std::abs(sol.J - J), 0.02 * std::abs(J));
}

}  // namespace
}  // namespace gaitforge
