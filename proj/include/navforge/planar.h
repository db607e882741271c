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

#ifndef NAVFORGE_PLANAR_H_
#define NAVFORGE_PLANAR_H_

#include <array>
#include <cmath>
#include <numbers>

namespace navforge {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
// z-component of the 3D cross product.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// World-frame pose of the body origin. yaw in (-pi, pi].
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose2&, const Pose2&) = default;
};

// Body-frame twist.
struct Twist2 {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  friend bool operator==(const Twist2&, const Twist2&) = default;
};

// Body-frame wrench, expressed at the body origin.
struct Wrench2 {
  double fx = 0.0;
  double fy = 0.0;
  double tau = 0.0;

  Wrench2& operator+=(const Wrench2& o) {
    fx += o.fx;
    fy += o.fy;
    tau += o.tau;
    return *this;
  }
  friend Wrench2 operator+(Wrench2 a, const Wrench2& b) { return a += b; }
  friend bool operator==(const Wrench2&, const Wrench2&) = default;
};

struct MassProps {
  double mass = 1.0;        // kg, > 0
  double inertia_zz = 1.0;  // kg m^2, > 0
  Vec2 com_offset;          // body frame, m

  bool valid() const {
    return std::isfinite(mass) && std::isfinite(inertia_zz) && mass > 0.0 &&
           inertia_zz > 0.0;
  }
  friend bool operator==(const MassProps&, const MassProps&) = default;
};

// Diagonal damping on (vx, vy, omega):
//   F_i = -(linear_i * v_i + quadratic_i * |v_i| * v_i)
struct DampingSpec {
  std::array<double, 3> linear{0.0, 0.0, 0.0};
  std::array<double, 3> quadratic{0.0, 0.0, 0.0};

  friend bool operator==(const DampingSpec&, const DampingSpec&) = default;
};

// Bounds for the TrackVelocities reference generator.
struct VelocityReferenceBounds {
  double v_min = 0.0;
  double v_max = 0.3;
  double omega_max = 0.5;
};

struct PlanarState {
  Pose2 pose;
  Twist2 twist;

  friend bool operator==(const PlanarState&, const PlanarState&) = default;
};

// Maps theta into (-pi, pi]. Throws std::domain_error on non-finite input.
double normalize_angle(double theta);

Vec2 world_to_body(const Pose2& pose, Vec2 point_world);
Vec2 body_to_world(const Pose2& pose, Vec2 point_body);
// Rotates a body-frame vector into the world frame (no translation).
Vec2 rotate_to_world(double yaw, Vec2 v_body);

// Wrench about the center of mass for a wrench given at the body origin:
// tau += r x F with r the lever arm from the CoM to the origin.
Wrench2 wrench_about_com(const Wrench2& wrench, const MassProps& props);

Wrench2 damping_wrench(const Twist2& twist, const DampingSpec& damping);

// Semi-implicit Euler step of a single 3-DoF body. The twist is updated from
// the accelerations at the current twist, then the pose is advanced with the
// new twist and yaw is renormalized. Body-frame twist is the integrated state
// with no rotating-frame (omega x v) coupling: with zero wrench and zero
// damping it is left unchanged.
// Throws SimulationFault (env index -1) when the result is not finite.
PlanarState integrate_step(const PlanarState& state, const Wrench2& wrench,
                           const MassProps& props, const DampingSpec& damping,
                           double dt);

// Clamps the planar speed to v_max and |omega| to omega_max.
Twist2 clamp_twist(const Twist2& twist, double v_max, double omega_max);

bool is_finite(const PlanarState& s);

}  // namespace navforge

#endif  // NAVFORGE_PLANAR_H_
