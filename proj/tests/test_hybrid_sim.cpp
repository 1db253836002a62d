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

#include "gaitforge/hybrid_sim.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

namespace gaitforge {
namespace {

// Lift-off state of a short passive step: the swing foot leaves the ground
// behind the stance foot and strikes about 0.12 m ahead near t = 0.44 s.
const SwingState kLiftOff(-0.2525, 0.2525, 2.7255, 4.2759);

TEST(ControlSignal, PiecewiseLinearWithClamping) {
  const ControlSignal c = ControlSignal::sampled({0.0, 1.0, 2.0}, {0.0, 10.0, -10.0});
  EXPECT_DOUBLE_EQ(c(0.5), 5.0);
  EXPECT_DOUBLE_EQ(c(1.5), 0.0);
  EXPECT_DOUBLE_EQ(c(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(c(3.0), -10.0);
  EXPECT_DOUBLE_EQ(c.duration(), 2.0);
  EXPECT_DOUBLE_EQ(ControlSignal::constant(4.0, 1.0)(7.0), 4.0);
  EXPECT_DOUBLE_EQ(ControlSignal::zero(1.0)(0.3), 0.0);
  EXPECT_THROW(ControlSignal::sampled({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(ControlSignal::sampled({0.0}, {1.0}), std::invalid_argument);
}

TEST(IntegrateSwing, PassiveStepStrikesAhead) {
  const ModelParams p;
  const StepTrace tr = integrate_swing(kLiftOff, ControlSignal::zero(1.0), p);
  EXPECT_NEAR(tr.impact_time, 0.44, 0.01);
  EXPECT_GT(step_length(tr.x_minus(), p), 0.1);
  EXPECT_LE(std::abs(foot_height(tr.x_minus(), p)), 1e-10);
  for (std::size_t k = 1; k < tr.t.size(); ++k) ASSERT_GT(tr.t[k], tr.t[k - 1]);
  EXPECT_EQ(tr.t.size(), tr.x.size());
  EXPECT_EQ(tr.t.size(), tr.grf.size());
  EXPECT_EQ(tr.impact.x_plus, impact_map(tr.x_minus(), p).x_plus);
}

TEST(IntegrateSwing, StartOnGroundIsNotAnEvent) {
  // Foot on the ground ahead of the stance foot and moving down at t = 0.
  const ModelParams p;
  const SwingState x0(0.2, -0.2, 1.0, 0.5);
  ASSERT_LT(foot_height(SwingState(x0 + 1e-4 * swing_dynamics(x0, 0.0, p)), p), 0.0);
  try {
    const StepTrace tr = integrate_swing(x0, ControlSignal::zero(1.0), p);
    EXPECT_GT(tr.impact_time, 10 * SimOptions{}.dt);
  } catch (const SimulationError& e) {
    SUCCEED() << e.what();
  }
}

TEST(IntegrateSwing, RestingSymmetricStanceIsDiagnosed) {
  const ModelParams p;
  for (const SwingState& x0 : {SwingState(0.2, -0.2, 0.0, 0.0), SwingState(0.0, 0.0, 0.0, 0.0)}) {
    try {
      integrate_swing(x0, ControlSignal::zero(1.0), p);
      ADD_FAILURE() << "expected a diagnosis for " << x0.transpose();
    } catch (const SimulationError& e) {
      EXPECT_TRUE(e.reason() == SimFailure::NoImpact || e.reason() == SimFailure::Fall) << e.what();
    }
  }
}

TEST(IntegrateSwing, NoImpactWithinMaxTime) {
  SimOptions opts;
  opts.max_time = 0.1;
  try {
    integrate_swing(kLiftOff, ControlSignal::zero(1.0), ModelParams{}, opts);
    FAIL();
  } catch (const SimulationError& e) {
    EXPECT_EQ(e.reason(), SimFailure::NoImpact);
  }
}

TEST(IntegrateSwing, FourthOrderConvergence) {
  const ModelParams p;
  const ControlSignal ctrl = ControlSignal::constant(0.5, 1.0);
  SimOptions ref_opts;
  ref_opts.dt = 1e-4;
  const SwingState ref = integrate_swing(kLiftOff, ctrl, p, ref_opts).x_minus();
  auto error = [&](double dt) {
    SimOptions o;
    o.dt = dt;
    return (integrate_swing(kLiftOff, ctrl, p, o).x_minus() - ref).cwiseAbs().maxCoeff();
  };
  const double e1 = error(0.02), e2 = error(0.01);
  EXPECT_GE(e1 / e2, 8.0) << e1 << " " << e2;
}

TEST(IntegrateSwing, AdaptiveAgreesWithFixedStep) {
  const ModelParams p;
  SimOptions fine;
  fine.dt = 1e-4;
  SimOptions adaptive;
  adaptive.adaptive = true;
  adaptive.dt = 0.05;
  const StepTrace a = integrate_swing(kLiftOff, ControlSignal::zero(1.0), p, fine);
  const StepTrace b = integrate_swing(kLiftOff, ControlSignal::zero(1.0), p, adaptive);
  EXPECT_NEAR(a.impact_time, b.impact_time, 1e-7);
  EXPECT_LE((a.x_minus() - b.x_minus()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(b.t.size(), a.t.size());
}

TEST(IntegrateSwing, MirroredMotionGivesMirroredTrace) {
  const ModelParams p;
  const ControlSignal ctrl = ControlSignal::sampled({0.0, 0.2, 0.6}, {1.0, -2.0, 0.5});
  SimOptions back;
  back.direction = -1.0;
  const StepTrace a = integrate_swing(kLiftOff, ctrl, p);
  const StepTrace b = integrate_swing(mirror(kLiftOff), ctrl.mirrored(), p, back);
  ASSERT_EQ(a.t.size(), b.t.size());
  for (std::size_t k = 0; k < a.t.size(); ++k) {
    EXPECT_NEAR(a.t[k], b.t[k], 1e-12);
    EXPECT_LE((mirror(a.x[k]) - b.x[k]).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(IntegrateSwing, WorkMatchesEnergyChange) {
  const ModelParams p;
  SimOptions opts;
  opts.dt = 1e-4;
  const std::pair<SwingState, double> cases[] = {{kLiftOff, 0.0}, {SwingState(-0.3, 0.3, 2.0, 2.5), 5.0}};
  for (const auto& [x0, u] : cases) {
    const StepTrace tr = integrate_swing(x0, ControlSignal::constant(u, 1.0), p, opts);
    const double dE = mechanical_energy(tr.x_minus(), p).total() - mechanical_energy(tr.x.front(), p).total();
    const double scale = std::max({1.0, std::abs(dE), std::abs(tr.actuator_work)});
    EXPECT_LE(std::abs(dE - tr.actuator_work) / scale, 1e-6) << "u=" << u;
  }
}

TEST(Rollout, SingleStepIsComposition) {
  const ModelParams p;
  const ControlSignal ctrl = ControlSignal::zero(1.0);
  const RolloutResult r = rollout(kLiftOff, ctrl, 1, p);
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_FALSE(r.failure.has_value());
  const StepTrace direct = integrate_swing(kLiftOff, ctrl, p);
  EXPECT_EQ(r.steps[0].x, direct.x);
  EXPECT_EQ(r.steps[0].impact.x_plus, impact_map(direct.x_minus(), p).x_plus);
}

TEST(Rollout, FeedsPostImpactStateForward) {
  const ModelParams p;
  const RolloutResult r = rollout(kLiftOff, ControlSignal::zero(1.0), 3, p);
  for (std::size_t k = 1; k < r.steps.size(); ++k) {
    EXPECT_EQ(r.steps[k].x.front(), r.steps[k - 1].impact.x_plus);
  }
  if (r.failure) {
    EXPECT_EQ(r.failure->step, static_cast<int>(r.steps.size()));
  }
}

TEST(Rollout, StopsOnBoundViolation) {
  const RolloutResult r = rollout(SwingState(0.0, 0.0, 50.0, 0.0), ControlSignal::zero(1.0), 4, ModelParams{});
  ASSERT_TRUE(r.failure.has_value());
  EXPECT_EQ(r.failure->reason, SimFailure::BoundViolation);
  EXPECT_EQ(r.failure->step, 0);
  EXPECT_TRUE(r.steps.empty());
  EXPECT_THROW(rollout(kLiftOff, ControlSignal::zero(1.0), 0, ModelParams{}), std::invalid_argument);
}

TEST(PeriodicityResidual, HandBuiltMismatch) {
  const ModelParams p;
  const SwingState final_state(0.25, -0.25, 1.0, -3.0);
  const SwingState start = impact_map(final_state, p).x_plus + SwingState(0.0, 0.01, -0.02, 0.0);
  EXPECT_NEAR(periodicity_residual(start, final_state, p), 0.02, 1e-15);
  EXPECT_EQ(periodicity_residual(impact_map(final_state, p).x_plus, final_state, p), 0.0);
}

TEST(WriteCsv, HeaderAndRows) {
  const StepTrace tr = integrate_swing(kLiftOff, ControlSignal::zero(1.0), ModelParams{});
  std::ostringstream os;
  write_csv(os, {tr, tr});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,q_st,q_sw,qd_st,qd_sw,u,F_T,F_N");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(rows, 2 * tr.t.size());
}

}  // namespace
}  // namespace gaitforge
