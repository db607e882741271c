// Copyright 2026 The NavForge Authors
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

#include "navforge/planar.h"

#include <cmath>
#include <stdexcept>

#include "navforge/errors.h"

namespace navforge {

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::domain_error("normalize_angle: non-finite angle");
  }
  if (theta > -kPi && theta <= kPi) return theta;
  double r = std::remainder(theta, 2.0 * kPi);  // in [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Vec2 rotate_to_world(double yaw, Vec2 v) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Vec2 world_to_body(const Pose2& pose, Vec2 p) {
  const double c = std::cos(pose.yaw);
  const double s = std::sin(pose.yaw);
  const double dx = p.x - pose.x;
  const double dy = p.y - pose.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

Vec2 body_to_world(const Pose2& pose, Vec2 p) {
  const Vec2 r = rotate_to_world(pose.yaw, p);
  return {r.x + pose.x, r.y + pose.y};
}

Wrench2 wrench_about_com(const Wrench2& wrench, const MassProps& props) {
  const Vec2 lever{-props.com_offset.x, -props.com_offset.y};
  Wrench2 out = wrench;
  out.tau += cross(lever, {wrench.fx, wrench.fy});
  return out;
}

Wrench2 damping_wrench(const Twist2& t, const DampingSpec& d) {
  auto f = [](double v, double lin, double quad) {
    return -(lin * v + quad * std::abs(v) * v);
  };
  return {f(t.vx, d.linear[0], d.quadratic[0]),
          f(t.vy, d.linear[1], d.quadratic[1]),
          f(t.omega, d.linear[2], d.quadratic[2])};
}

PlanarState integrate_step(const PlanarState& state, const Wrench2& wrench,
                           const MassProps& props, const DampingSpec& damping,
                           double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_step: dt <= 0");
  if (!props.valid()) {
    throw std::invalid_argument("integrate_step: invalid mass properties");
  }
  const Wrench2 total =
      wrench_about_com(wrench, props) + damping_wrench(state.twist, damping);

  PlanarState next;
  next.twist.vx = state.twist.vx + total.fx / props.mass * dt;
  next.twist.vy = state.twist.vy + total.fy / props.mass * dt;
  next.twist.omega = state.twist.omega + total.tau / props.inertia_zz * dt;

  const Vec2 v_world =
      rotate_to_world(state.pose.yaw, {next.twist.vx, next.twist.vy});
  next.pose.x = state.pose.x + v_world.x * dt;
  next.pose.y = state.pose.y + v_world.y * dt;
  const double yaw = state.pose.yaw + next.twist.omega * dt;
  if (!is_finite(next) || !std::isfinite(yaw)) {
    throw SimulationFault("integrate_step: non-finite state", -1);
  }
  next.pose.yaw = normalize_angle(yaw);
  return next;
}

Twist2 clamp_twist(const Twist2& t, double v_max, double omega_max) {
  Twist2 out = t;
  const double speed = std::hypot(t.vx, t.vy);
  if (speed > v_max) {
    const double s = v_max / speed;
    out.vx *= s;
    out.vy *= s;
  }
  if (out.omega > omega_max) out.omega = omega_max;
  if (out.omega < -omega_max) out.omega = -omega_max;
  return out;
}

bool is_finite(const PlanarState& s) {
  return std::isfinite(s.pose.x) && std::isfinite(s.pose.y) &&
         std::isfinite(s.pose.yaw) && std::isfinite(s.twist.vx) &&
         std::isfinite(s.twist.vy) && std::isfinite(s.twist.omega);
}

}  // namespace navforge
