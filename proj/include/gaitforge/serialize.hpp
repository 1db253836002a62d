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

// JSON forms of params, gaits and animation frames. Doubles are written in
// shortest round-trip form, so parse(dump(x)) reproduces every bit.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gaitforge/frames.hpp"
#include "gaitforge/gait.hpp"

namespace gaitforge {

using json = nlohmann::json;

inline constexpr const char* kGaitSchema = "gaitforge-gait/1";
inline constexpr const char* kFramesSchema = "gaitforge-frames/1";

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json to_json(const ModelParams& p) {
  return {{"mass", p.mass},         {"leg_length", p.leg_length}, {"gravity", p.gravity},
          {"friction_mu", p.friction_mu}, {"torque_min", p.torque_min}, {"torque_max", p.torque_max},
          {"q_min", p.q_min},       {"q_max", p.q_max},           {"qd_min", p.qd_min},
          {"qd_max", p.qd_max}};
}

/// Applies the keys present in `j` over `base`; unknown keys are errors.
inline ModelParams params_from_json(const json& j, ModelParams base = {}) {
  if (!j.is_object()) throw std::invalid_argument("params must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw std::invalid_argument("params." + key + " must be a number");
    if (!base.set(key, value.get<double>())) throw std::invalid_argument("unknown params key '" + key + "'");
  }
  base.validate();
  return base;
}

inline json to_json(const SolverOptions& o) {
  return {{"rho0", o.rho0},
          {"rho_growth", o.rho_growth},
          {"rho_max", o.rho_max},
          {"max_outer", o.max_outer},
          {"max_inner", o.max_inner},
          {"eq_tol", o.eq_tol},
          {"ineq_tol", o.ineq_tol},
          {"stationarity_tol", o.stationarity_tol},
          {"target_stationarity", o.target_stationarity},
          {"max_step", o.max_step}};
}

// Residuals of a diverged solve can be non-finite; JSON has no inf, so those
// travel as null and come back as +inf.
inline json to_json(const KktResiduals& k) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"stationarity", num(k.stationarity)},
          {"stationarity_scaled", num(k.stationarity_scaled)},
          {"eq_violation", num(k.eq_violation)},
          {"ineq_violation", num(k.ineq_violation)},
          {"complementarity", num(k.complementarity)}};
}

inline KktResiduals kkt_from_json(const json& j) {
  auto num = [&](const char* key) {
    const json& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
  };
  KktResiduals k;
  k.stationarity = num("stationarity");
  k.stationarity_scaled = num("stationarity_scaled");
  k.eq_violation = num("eq_violation");
  k.ineq_violation = num("ineq_violation");
  k.complementarity = num("complementarity");
  return k;
}

inline std::optional<SolveStatus> parse_status(const std::string& s) {
  for (SolveStatus st : {SolveStatus::Converged, SolveStatus::MaxIter, SolveStatus::Infeasible,
                         SolveStatus::Diverged, SolveStatus::Interrupted}) {
    if (s == to_string(st)) return st;
  }
  return std::nullopt;
}

namespace detail {

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> read_optional(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace detail

/// Catalog-entry form: everything except the schema tag and model params.
inline json entry_to_json(const Gait& g) {
  json states = json::array(), grf = json::array();
  for (const SwingState& x : g.states) states.push_back({x(0), x(1), x(2), x(3)});
  for (const GroundForces& f : g.grf) grf.push_back({f.F_T, f.F_N});
  const Diagnostics& d = g.diagnostics;
  json j = {{"tl", g.spec.TL},
            {"cost_mode", cost_name(g.spec.cost)},
            {"v", g.spec.v},
            {"t_f_bounds", {g.spec.tf_min, g.spec.tf_max}},
            {"t_f", g.t_f},
            {"nodes", g.nodes},
            {"states", states},
            {"inputs", g.inputs},
            {"grf", grf},
            {"J_star", g.J_star},
            {"diagnostics",
             {{"defect_max", d.defect_max},
              {"periodicity_residual", d.periodicity_residual},
              {"placement_error", d.placement_error},
              {"path_violation", d.path_violation},
              {"resim_footplace_error", detail::optional_number(d.resim_footplace_error)},
              {"resim_time_error", detail::optional_number(d.resim_time_error)}}},
            {"status", to_string(g.status)},
            {"verified", g.verified},
            {"kkt", to_json(g.kkt)},
            {"iterations", g.iterations}};
  if (!g.failed_check.empty()) j["failed_check"] = g.failed_check;
  if (g.label) j["label"] = *g.label;
  return j;
}

inline Gait entry_from_json(const json& j, const ModelParams& params) {
  Gait g;
  g.spec.TL = j.at("tl").get<double>();
  const auto cost = parse_cost_mode(j.at("cost_mode").get<std::string>());
  if (!cost) throw std::invalid_argument("unknown cost_mode '" + j.at("cost_mode").get<std::string>() + "'");
  g.spec.cost = *cost;
  g.spec.v = j.at("v").get<int>();
  g.spec.tf_min = j.at("t_f_bounds").at(0).get<double>();
  g.spec.tf_max = j.at("t_f_bounds").at(1).get<double>();
  g.spec.params = params;
  g.t_f = j.at("t_f").get<double>();
  g.nodes = j.at("nodes").get<std::vector<double>>();
  for (const json& s : j.at("states")) {
    g.states.emplace_back(s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>(),
                          s.at(3).get<double>());
  }
  g.inputs = j.at("inputs").get<std::vector<double>>();
  for (const json& f : j.at("grf")) g.grf.push_back({f.at(0).get<double>(), f.at(1).get<double>()});
  g.J_star = j.at("J_star").get<double>();
  const json& d = j.at("diagnostics");
  g.diagnostics.defect_max = d.at("defect_max").get<double>();
  g.diagnostics.periodicity_residual = d.at("periodicity_residual").get<double>();
  g.diagnostics.placement_error = d.at("placement_error").get<double>();
  g.diagnostics.path_violation = d.at("path_violation").get<double>();
  g.diagnostics.resim_footplace_error = detail::read_optional(d, "resim_footplace_error");
  g.diagnostics.resim_time_error = detail::read_optional(d, "resim_time_error");
  const auto status = parse_status(j.at("status").get<std::string>());
  if (!status) throw std::invalid_argument("unknown status '" + j.at("status").get<std::string>() + "'");
  g.status = *status;
  g.verified = j.at("verified").get<bool>();
  g.kkt = kkt_from_json(j.at("kkt"));
  g.iterations = j.at("iterations").get<int>();
  if (j.contains("failed_check")) g.failed_check = j.at("failed_check").get<std::string>();
  if (j.contains("label")) g.label = j.at("label").get<std::string>();
  const std::size_t n = g.states.size();
  if (g.nodes.size() != n || g.inputs.size() != n || g.grf.size() != n) {
    throw std::invalid_argument("gait entry: nodes/states/inputs/grf lengths differ");
  }
  return g;
}

inline json to_json(const Gait& g) {
  json j = entry_to_json(g);
  j["schema"] = kGaitSchema;
  j["params"] = to_json(g.spec.params);
  return j;
}

inline Gait gait_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema")) throw SchemaError("gait JSON: missing schema field");
  const std::string schema = j.at("schema").get<std::string>();
  if (schema != kGaitSchema) {
    throw SchemaError("gait JSON: unsupported schema '" + schema + "' (expected " + kGaitSchema + ")");
  }
  return entry_from_json(j, params_from_json(j.at("params")));
}

/// The canonical text of a gait; CLI and HTTP both emit exactly this.
inline std::string dump_gait(const Gait& g) { return to_json(g).dump(); }

/// What a failed synthesis reports, on stderr from the CLI and as the HTTP
/// 422 body.
inline json failure_report(const Gait& g) {
  json report = {{"error", "synthesis failed"},
                 {"status", to_string(g.status)},
                 {"check", g.failed_check},
                 {"kkt", to_json(g.kkt)}};
  if (!g.states.empty()) report["diagnostics"] = entry_to_json(g)["diagnostics"];
  return report;
}

inline json to_json(const AnimationFrames& a) {
  json frames = json::array();
  for (const Frame& f : a.frames) {
    frames.push_back({{"t", f.t},
                      {"stance", {{f.stance.hip.x(), f.stance.hip.y()}, {f.stance.foot.x(), f.stance.foot.y()}}},
                      {"swing", {{f.swing.hip.x(), f.swing.hip.y()}, {f.swing.foot.x(), f.swing.foot.y()}}}});
  }
  return {{"schema", kFramesSchema}, {"fps", a.fps}, {"t_f", a.t_f}, {"frames", frames}};
}

inline std::string dump_frames(const AnimationFrames& a) { return to_json(a).dump(); }

}  // namespace gaitforge
