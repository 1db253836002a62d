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

// One gait end to end: transcribe, solve, audit the solution, and replay its
// control through the hybrid simulator.

#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaitforge/hybrid_sim.hpp"
#include "gaitforge/nlp.hpp"
#include "gaitforge/transcription.hpp"

namespace gaitforge {

// Acceptance thresholds for the verified flag.
inline constexpr double kMaxDefect = 1e-6;
inline constexpr double kMaxPeriodicity = 1e-4;
inline constexpr double kMaxPlacement = 1e-6;  // m
inline constexpr double kMaxPathViolation = 1e-6;  // N
inline constexpr double kMaxResimError = 0.02;  // relative

struct Diagnostics {
  double defect_max = 0.0;
  double periodicity_residual = 0.0;
  double placement_error = 0.0;  // |step length - TL| and final foot height, m
  double path_violation = 0.0;   // max node path residual, N (<= 0 is feasible)
  // Relative errors of the open-loop replay; empty when the replay failed.
  std::optional<double> resim_footplace_error;
  std::optional<double> resim_time_error;

  bool operator==(const Diagnostics&) const = default;
};

struct Gait {
  GaitSpec spec;
  double t_f = 0.0;
  std::vector<double> nodes;  // s
  std::vector<SwingState> states;
  std::vector<double> inputs;
  std::vector<GroundForces> grf;
  double J_star = 0.0;
  Diagnostics diagnostics;
  std::optional<std::string> label;

  SolveStatus status = SolveStatus::MaxIter;
  bool verified = false;
  std::string failed_check;  // empty when verified
  KktResiduals kkt;
  int iterations = 0;

  Trajectory trajectory() const { return Trajectory{states, inputs, t_f}; }
  ControlSignal control() const { return ControlSignal::sampled(nodes, inputs); }
  bool operator==(const Gait&) const = default;
};

class SynthesisFailed : public std::runtime_error {
 public:
  explicit SynthesisFailed(Gait attempt)
      : std::runtime_error(std::string("synthesis failed (") + to_string(attempt.status) + "): " +
                           attempt.failed_check),
        attempt_(std::move(attempt)) {}
  const Gait& attempt() const { return attempt_; }
  SolveStatus status() const { return attempt_.status; }
  const std::string& check() const { return attempt_.failed_check; }

 private:
  Gait attempt_;
};

/// Longest step the legs can span inside the joint limits.
inline double kinematic_reach(const ModelParams& p) {
  const double a = std::min({p.q_max, -p.q_min, std::numbers::pi / 2});
  return 2.0 * p.leg_length * std::sin(a);
}

/// Recomputes every diagnostic from the raw node data; nothing is trusted
/// from the solver. The verified flag is left to the caller.
inline Diagnostics audit(const Gait& g) {
  const GaitSpec& s = g.spec;
  const Vec z = pack(g.trajectory());
  Diagnostics d;
  const Vec defects = defect_constraints(z, s);
  d.defect_max = defects.size() ? defects.cwiseAbs().maxCoeff() : 0.0;
  d.periodicity_residual = periodicity_residual(g.states.front(), g.states.back(), s.params);
  const Vec b = boundary_constraints(z, s);
  d.placement_error = std::max(std::abs(b(0)), std::abs(b(1)));
  d.path_violation = path_constraints(z, s).maxCoeff();
  try {
    const StepTrace st = integrate_swing(g.states.front(), g.control(), s.params);
    d.resim_footplace_error = std::abs(step_length(st.x_minus(), s.params) - s.TL) / s.TL;
    d.resim_time_error = std::abs(st.impact_time - g.t_f) / g.t_f;
  } catch (const SimulationError&) {
  } catch (const SingularImpact&) {
  }
  return d;
}

/// Name of the first failing check, empty when all pass.
inline std::string first_failed_check(const Gait& g) {
  const Diagnostics& d = g.diagnostics;
  std::ostringstream os;
  os.precision(3);
  if (g.status != SolveStatus::Converged) {
    os << "solver: " << to_string(g.status) << " (eq " << g.kkt.eq_violation << ", in " << g.kkt.ineq_violation
       << ", stationarity " << g.kkt.stationarity_scaled << ")";
  } else if (!(d.defect_max <= kMaxDefect)) {
    os << "defects: max " << d.defect_max << " > " << kMaxDefect;
  } else if (!(d.periodicity_residual <= kMaxPeriodicity)) {
    os << "periodicity: " << d.periodicity_residual << " > " << kMaxPeriodicity;
  } else if (!(d.placement_error <= kMaxPlacement)) {
    os << "placement: " << d.placement_error << " m > " << kMaxPlacement;
  } else if (!(d.path_violation <= kMaxPathViolation)) {
    os << "path: residual " << d.path_violation << " N > 0";
  } else if (!d.resim_footplace_error) {
    os << "resimulation: the replayed control does not reach a forward foot strike";
  } else if (!(*d.resim_footplace_error <= kMaxResimError)) {
    os << "resimulation: foot placement off by " << 100.0 * *d.resim_footplace_error << "% of TL";
  }
  return os.str();
}

struct SynthesisOptions {
  SolverOptions solver;
  Derivatives derivatives = Derivatives::ComplexStep;
  // Retry from the stock guess when a warm-started solve does not converge.
  bool cold_retry = true;
};

/// Builds the Gait record for a spec, verified or not; never throws for a
/// failed solve. Throws std::invalid_argument on an invalid spec.
inline Gait attempt_synthesis(const GaitSpec& spec, const std::optional<Trajectory>& warm = std::nullopt,
                              const SynthesisOptions& opts = {}) {
  spec.validate();
  Gait g;
  g.spec = spec;
  const double reach = kinematic_reach(spec.params);
  if (!(spec.TL < reach)) {
    std::ostringstream os;
    os << "step length " << spec.TL << " m exceeds the kinematic reach " << reach
       << " m of two legs of length " << spec.params.leg_length << " m";
    g.status = SolveStatus::Infeasible;
    g.failed_check = "kinematic reach: " + os.str();
    return g;
  }

  const NlpProblem problem = assemble(spec, opts.derivatives);
  NlpSolution sol = solve(problem, initial_guess(spec, warm), opts.solver);
  if (warm && opts.cold_retry && sol.status != SolveStatus::Converged && sol.status != SolveStatus::Interrupted) {
    NlpSolution cold = solve(problem, initial_guess(spec), opts.solver);
    cold.iterations += sol.iterations;
    sol = std::move(cold);
  }

  const Trajectory tr = unpack(sol.z);
  g.t_f = tr.t_f;
  g.states = tr.states;
  g.inputs = tr.inputs;
  for (int k = 0; k < tr.nodes(); ++k) {
    g.nodes.push_back(tr.time(k));
    g.grf.push_back(stance_grf(tr.states[k], tr.inputs[k], spec.params));
  }
  g.J_star = sol.J;
  g.status = sol.status;
  g.kkt = sol.kkt;
  g.iterations = sol.iterations;
  g.diagnostics = audit(g);
  g.failed_check = first_failed_check(g);
  g.verified = g.failed_check.empty();
  return g;
}

/// A verified Gait, or SynthesisFailed carrying the attempt.
inline Gait synthesize(const GaitSpec& spec, const std::optional<Gait>& warm = std::nullopt,
                       const SynthesisOptions& opts = {}) {
  std::optional<Trajectory> w;
  if (warm) w = warm->trajectory();
  Gait g = attempt_synthesis(spec, w, opts);
  if (!g.verified) throw SynthesisFailed(std::move(g));
  return g;
}

/// Re-derives diagnostics from the stored trajectories and checks them
/// against the thresholds. True iff the gait would be marked verified now.
inline bool reverify(const Gait& g) {
  if (g.states.size() < 5 || g.status != SolveStatus::Converged) return false;
  Gait copy = g;
  copy.diagnostics = audit(g);
  return first_failed_check(copy).empty();
}

}  // namespace gaitforge
