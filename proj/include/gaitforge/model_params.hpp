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

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gaitforge {

/// Physical constants and box limits of the compass-gait model.
///
/// Both legs are identical: a point mass `mass` at the midpoint of a massless
/// rod of length `leg_length`. The torque acts at the hip on the swing leg.
struct ModelParams {
  double mass = 5.0;          // kg
  double leg_length = 1.0;    // m
  double gravity = 9.81;      // m/s^2
  double friction_mu = 0.8;   // stance-foot Coulomb coefficient
  double torque_min = -30.0;  // N m
  double torque_max = 30.0;
  double q_min = -std::numbers::pi / 2;  // rad, from the upward vertical
  double q_max = std::numbers::pi / 2;
  double qd_min = -10.0;  // rad/s
  double qd_max = 10.0;

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const {
    auto finite_positive = [](double v, const char* name) {
      if (!std::isfinite(v) || !(v > 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be finite and > 0");
      }
    };
    finite_positive(mass, "mass");
    finite_positive(leg_length, "leg_length");
    finite_positive(gravity, "gravity");
    finite_positive(friction_mu, "friction_mu");
    auto ordered = [](double lo, double hi, const char* name) {
      if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw std::invalid_argument(std::string(name) + ": require min < max");
      }
    };
    ordered(torque_min, torque_max, "torque");
    ordered(q_min, q_max, "q");
    ordered(qd_min, qd_max, "qd");
  }

  /// Assigns a field by its config-file key. Returns false for unknown keys.
  bool set(const std::string& key, double value) {
    if (key == "mass") mass = value;
    else if (key == "leg_length") leg_length = value;
    else if (key == "gravity") gravity = value;
    else if (key == "friction_mu") friction_mu = value;
    else if (key == "torque_min") torque_min = value;
    else if (key == "torque_max") torque_max = value;
    else if (key == "q_min") q_min = value;
    else if (key == "q_max") q_max = value;
    else if (key == "qd_min") qd_min = value;
    else if (key == "qd_max") qd_max = value;
    else return false;
    return true;
  }

  bool operator==(const ModelParams&) const = default;
};

inline constexpr const char* kParamKeys[] = {
    "mass",     "leg_length", "gravity", "friction_mu", "torque_min",
    "torque_max", "q_min",    "q_max",   "qd_min",      "qd_max"};

/// Parses `key = value` lines. `#` starts a comment; keys not present keep
/// their defaults. Unknown keys and malformed lines are errors.
inline ModelParams parse_params(std::istream& in, ModelParams base = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const char* ws = " \t\r";
      s.erase(0, s.find_first_not_of(ws));
      s.erase(s.find_last_not_of(ws) + 1);
      return s;
    };
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // tolerate a TOML table header
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("params line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string text = trim(line.substr(eq + 1));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw std::invalid_argument("params line " + std::to_string(lineno) + ": bad number '" + text + "'");
    }
    if (!base.set(key, value)) {
      throw std::invalid_argument("params line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  base.validate();
  return base;
}

inline ModelParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  return parse_params(in);
}

}  // namespace gaitforge
