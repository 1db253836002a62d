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

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "gaitforge/gait.hpp"

namespace gaitforge {

inline constexpr int kFramesPerSecond = 60;

struct LegPose {
  Eigen::Vector2d hip;
  Eigen::Vector2d foot;
};

struct Frame {
  double t = 0.0;
  SwingState x;
  LegPose stance, swing;
};

struct AnimationFrames {
  int fps = kFramesPerSecond;
  double t_f = 0.0;
  std::vector<Frame> frames;
};

/// World-frame leg endpoints with the stance foot at `origin`.
inline std::pair<LegPose, LegPose> leg_poses(const SwingState& x, const ModelParams& p,
                                             const Eigen::Vector2d& origin = Eigen::Vector2d::Zero()) {
  const double r = p.leg_length;
  const Eigen::Vector2d hip = origin + r * Eigen::Vector2d(std::sin(x(kQst)), std::cos(x(kQst)));
  const Eigen::Vector2d foot = hip - r * Eigen::Vector2d(std::sin(x(kQsw)), std::cos(x(kQsw)));
  return {LegPose{hip, origin}, LegPose{hip, foot}};
}

/// State at time t in [0, t_f] from the trapezoid-collocation interpolant:
/// each state is quadratic between nodes with its node derivatives as end
/// slopes, so the node values are reproduced exactly.
inline SwingState interpolate_state(const Gait& g, double t) {
  const int last = static_cast<int>(g.states.size()) - 1;
  const double h = g.t_f / last;
  t = std::clamp(t, 0.0, g.t_f);
  const int k = std::min(static_cast<int>(t / h), last - 1);
  const double tau = t - k * h;
  if (tau == 0.0) return g.states[k];
  if (k + 1 == last && tau >= h) return g.states[last];
  const Eigen::Vector4d f0 = swing_dynamics(g.states[k], g.inputs[k], g.spec.params);
  const Eigen::Vector4d f1 = swing_dynamics(g.states[k + 1], g.inputs[k + 1], g.spec.params);
  return g.states[k] + f0 * tau + (f1 - f0) * (0.5 * tau * tau / h);
}

/// ceil(t_f * fps) + 1 frames at k / fps, the last one pinned to t_f.
inline AnimationFrames animation_frames(const Gait& g, int fps = kFramesPerSecond) {
  AnimationFrames out;
  out.fps = fps;
  out.t_f = g.t_f;
  if (g.states.size() < 2) return out;
  const int count = static_cast<int>(std::ceil(g.t_f * fps)) + 1;
  out.frames.reserve(count);
  for (int k = 0; k < count; ++k) {
    Frame f;
    f.t = k + 1 == count ? g.t_f : static_cast<double>(k) / fps;
    f.x = interpolate_state(g, f.t);
    std::tie(f.stance, f.swing) = leg_poses(f.x, g.spec.params);
    out.frames.push_back(f);
  }
  return out;
}

inline void write_frames_csv(std::ostream& os, const AnimationFrames& a) {
  const auto prec = os.precision(17);
  os << "t,stance_hip_x,stance_hip_y,stance_foot_x,stance_foot_y,swing_hip_x,swing_hip_y,swing_foot_x,swing_foot_y\n";
  for (const Frame& f : a.frames) {
    os << f.t << ',' << f.stance.hip.x() << ',' << f.stance.hip.y() << ',' << f.stance.foot.x() << ','
       << f.stance.foot.y() << ',' << f.swing.hip.x() << ',' << f.swing.hip.y() << ',' << f.swing.foot.x() << ','
       << f.swing.foot.y() << '\n';
  }
  os.precision(prec);
}

}  // namespace gaitforge
