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

#include "navforge/config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "navforge/errors.h"

namespace navforge {
namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void type_error(const std::string& path, const char* want) {
  throw ConfigError(path + ": expected " + want);
}

// JSON has no NaN; null stands in for it.
Json number(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

void read(const Json& j, double& out, const std::string& path) {
  if (j.is_null()) {
    out = std::numeric_limits<double>::quiet_NaN();
  } else if (j.is_number()) {
    out = j.get<double>();
  } else {
    type_error(path, "a number");
  }
}

void read(const Json& j, int& out, const std::string& path) {
  if (!j.is_number_integer()) type_error(path, "an integer");
  out = j.get<int>();
}

void read(const Json& j, uint64_t& out, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    type_error(path, "a non-negative integer");
  }
  out = j.get<uint64_t>();
}

void read(const Json& j, bool& out, const std::string& path) {
  if (!j.is_boolean()) type_error(path, "a boolean");
  out = j.get<bool>();
}

void read(const Json& j, std::string& out, const std::string& path) {
  if (!j.is_string()) type_error(path, "a string");
  out = j.get<std::string>();
}

template <class T, class Parse>
void read_enum(const Json& j, T& out, const std::string& path, Parse parse) {
  if (!j.is_string()) type_error(path, "a string");
  out = parse(j.get<std::string>());
}

void read(const Json& j, MassMode& o, const std::string& p) {
  read_enum(j, o, p, parse_mass_mode);
}
void read(const Json& j, ComMode& o, const std::string& p) {
  read_enum(j, o, p, parse_com_mode);
}
void read(const Json& j, InertiaMode& o, const std::string& p) {
  read_enum(j, o, p, parse_inertia_mode);
}
void read(const Json& j, NoiseMode& o, const std::string& p) {
  read_enum(j, o, p, parse_noise_mode);
}
void read(const Json& j, WrenchMode& o, const std::string& p) {
  read_enum(j, o, p, parse_wrench_mode);
}
void read(const Json& j, Activation& o, const std::string& p) {
  read_enum(j, o, p, parse_activation);
}
void read(const Json& j, HeadKind& o, const std::string& p) {
  read_enum(j, o, p, parse_head_kind);
}
void read(const Json& j, ControlKind& o, const std::string& p) {
  read_enum(j, o, p, [&](const std::string& s) {
    if (s == "binary") return ControlKind::kBinary;
    if (s == "continuous") return ControlKind::kContinuous;
    throw ConfigError(p + ": unknown control kind '" + s + "'");
  });
}

void read_pair(const Json& j, double& a, double& b, const std::string& path) {
  if (!j.is_array() || j.size() != 2) type_error(path, "a two-element array");
  read(j[0], a, path + "[0]");
  read(j[1], b, path + "[1]");
}

void read(const Json& j, Range& r, const std::string& p) {
  read_pair(j, r.lo, r.hi, p);
}
void read(const Json& j, Vec2& v, const std::string& p) {
  read_pair(j, v.x, v.y, p);
}
void read(const Json& j, Slice& s, const std::string& p) {
  if (!j.is_array() || j.size() != 2) type_error(p, "a two-element array");
  read(j[0], s.begin, p + "[0]");
  read(j[1], s.end, p + "[1]");
}

template <class T>
void read(const Json& j, std::vector<T>& out, const std::string& path) {
  if (!j.is_array()) type_error(path, "an array");
  out.assign(j.size(), T{});
  for (size_t i = 0; i < j.size(); ++i) {
    read(j[i], out[i], path + "[" + std::to_string(i) + "]");
  }
}

template <class T, size_t N>
void read(const Json& j, std::array<T, N>& out, const std::string& path) {
  if (!j.is_array() || j.size() != N) {
    type_error(path, ("an array of " + std::to_string(N)).c_str());
  }
  for (size_t i = 0; i < N; ++i) {
    read(j[i], out[i], path + "[" + std::to_string(i) + "]");
  }
}

// Overlay helper that rejects unknown keys.
class Obj {
 public:
  Obj(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) type_error(path_.empty() ? "<root>" : path_, "an object");
  }
  ~Obj() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) {
        throw ConfigError(join(path_, k) + ": unknown key");
      }
    }
  }
  template <class T>
  void operator()(const char* key, T& out) {
    seen_.insert(key);
    if (auto it = j_.find(key); it != j_.end()) read(*it, out, join(path_, key));
  }
  // Nested structure handled by merge_json.
  template <class T>
  void nested(const char* key, T& out) {
    seen_.insert(key);
    if (auto it = j_.find(key); it != j_.end()) merge_json(*it, out, join(path_, key));
  }
  const Json* find(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  const std::string& path() const { return path_; }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
Json modes_json(const std::vector<T>& modes) {
  Json a = Json::array();
  for (T m : modes) a.push_back(to_string(m));
  return a;
}

Json pair_json(double a, double b) { return Json::array({number(a), number(b)}); }
Json range_json(const Range& r) { return pair_json(r.lo, r.hi); }
Json vec_json(const Vec2& v) { return pair_json(v.x, v.y); }

Json ranges_json(const std::vector<Range>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back(range_json(r));
  return a;
}

Json slices_json(const std::vector<Slice>& ss) {
  Json a = Json::array();
  for (const auto& s : ss) a.push_back(Json::array({s.begin, s.end}));
  return a;
}

Json doubles_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

template <size_t N>
Json vecs_json(const std::array<Vec2, N>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(vec_json(x));
  return a;
}

std::string control_kind_name(ControlKind k) {
  return k == ControlKind::kBinary ? "binary" : "continuous";
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Json to_json(const RandomizationConfig& c) {
  Json j;
  j["mass"] = {{"enable", c.mass.enable},
               {"randomization_modes", modes_json(c.mass.randomization_modes)},
               {"max_delta", c.mass.max_delta},
               {"std", c.mass.std},
               {"mass_change_rate", c.mass.mass_change_rate},
               {"min_mass", c.mass.min_mass}};
  j["com"] = {{"enable", c.com.enable},
              {"randomization_modes", modes_json(c.com.randomization_modes)},
              {"max_delta", c.com.max_delta},
              {"std", c.com.std}};
  j["inertia"] = {
      {"enable", c.inertia.enable},
      {"randomization_modes", modes_json(c.inertia.randomization_modes)},
      {"max_delta", c.inertia.max_delta},
      {"std", c.inertia.std},
      {"inertia_change_rate", number(c.inertia.inertia_change_rate)},
      {"min_inertia", c.inertia.min_inertia}};
  const auto& na = c.noisy_actions;
  j["noisy_actions"] = {{"enable", na.enable},
                        {"randomization_modes", modes_json(na.randomization_modes)},
                        {"slices", slices_json(na.slices)},
                        {"max_delta", doubles_json(na.max_delta)},
                        {"std", doubles_json(na.std)},
                        {"clip_actions", ranges_json(na.clip_actions)},
                        {"sample_scale_on_reset", na.sample_scale_on_reset},
                        {"resample_per_step", na.resample_per_step}};
  const auto& ar = c.actions_rescaler;
  j["actions_rescaler"] = {
      {"enable", ar.enable},
      {"randomization_modes", modes_json(ar.randomization_modes)},
      {"slices", slices_json(ar.slices)},
      {"rescaling_ranges", ranges_json(ar.rescaling_ranges)},
      {"clip_actions", ranges_json(ar.clip_actions)}};
  const auto& no = c.noisy_observations;
  j["noisy_observations"] = {
      {"enable", no.enable},
      {"randomization_modes", modes_json(no.randomization_modes)},
      {"slices", slices_json(no.slices)},
      {"max_delta", doubles_json(no.max_delta)},
      {"std", doubles_json(no.std)},
      {"normalize_angles", no.normalize_angles},
      {"sample_scale_on_reset", no.sample_scale_on_reset},
      {"resample_per_step", no.resample_per_step}};
  const auto& w = c.wrench;
  j["wrench"] = {{"enable", w.enable},
                 {"randomization_modes", modes_json(w.randomization_modes)},
                 {"uniform_force", range_json(w.uniform_force)},
                 {"uniform_torque", range_json(w.uniform_torque)},
                 {"normal_force", range_json(w.normal_force)},
                 {"normal_torque", range_json(w.normal_torque)},
                 {"push_interval", w.push_interval},
                 {"sinusoid_frequency", range_json(w.sinusoid_frequency)}};
  return j;
}

void merge_json(const Json& j, MassRandomizationConfig& c,
                const std::string& path) {
  Obj o(j, path);
  o("enable", c.enable);
  o("randomization_modes", c.randomization_modes);
  o("max_delta", c.max_delta);
  o("std", c.std);
  o("mass_change_rate", c.mass_change_rate);
  o("min_mass", c.min_mass);
}

void merge_json(const Json& j, ComRandomizationConfig& c,
                const std::string& path) {
  Obj o(j, path);
  o("enable", c.enable);
  o("randomization_modes", c.randomization_modes);
  o("max_delta", c.max_delta);
  o("std", c.std);
}

void merge_json(const Json& j, InertiaRandomizationConfig& c,
                const std::string& path) {
  Obj o(j, path);
  o("enable", c.enable);
  o("randomization_modes", c.randomization_modes);
  o("max_delta", c.max_delta);
  o("std", c.std);
  o("inertia_change_rate", c.inertia_change_rate);
  o("min_inertia", c.min_inertia);
}

void merge_json(const Json& j, NoisyActionsConfig& c,
                const std::string& path) {
  Obj o(j, path);
  o("enable", c.enable);
  o("randomization_modes", c.randomization_modes);
  o("slices", c.slices);
  o("max_delta", c.max_delta);
  o("std", c.std);
  o("clip_actions", c.clip_actions);
  o("sample_scale_on_reset", c.sample_scale_on_reset);
  o("resample_per_step", c.resample_per_step);
}

void merge_json(const Json& j, ActionsRescalerConfig& c,
                const std::string& path) {
  Obj o(j, path);
  o("enable", c.enable);
  o("randomization_modes", c.randomization_modes);
  o("slices", c.slices);
  o("rescaling_ranges", c.rescaling_ranges);
  o("clip_actions", c.clip_actions);
}

void merge_json(const Json& j, NoisyObservationsConfig& c,
                const std::string& path) {
  Obj o(j, path);
  o("enable", c.enable);
  o("randomization_modes", c.randomization_modes);
  o("slices", c.slices);
  o("max_delta", c.max_delta);
  o("std", c.std);
  o("normalize_angles", c.normalize_angles);
  o("sample_scale_on_reset", c.sample_scale_on_reset);
  o("resample_per_step", c.resample_per_step);
}

void merge_json(const Json& j, WrenchRandomizationConfig& c,
                const std::string& path) {
  Obj o(j, path);
  o("enable", c.enable);
  o("randomization_modes", c.randomization_modes);
  o("uniform_force", c.uniform_force);
  o("uniform_torque", c.uniform_torque);
  o("normal_force", c.normal_force);
  o("normal_torque", c.normal_torque);
  o("push_interval", c.push_interval);
  o("sinusoid_frequency", c.sinusoid_frequency);
}

void merge_json(const Json& j, RandomizationConfig& c,
                const std::string& path) {
  Obj o(j, path);
  o.nested("mass", c.mass);
  o.nested("com", c.com);
  o.nested("inertia", c.inertia);
  o.nested("noisy_actions", c.noisy_actions);
  o.nested("actions_rescaler", c.actions_rescaler);
  o.nested("noisy_observations", c.noisy_observations);
  o.nested("wrench", c.wrench);
}

Json to_json(const RobotSpec& s) {
  Json j;
  j["name"] = s.name;
  j["control_space"] = {{"kind", control_kind_name(s.control_space.kind)},
                        {"dim", s.control_space.dim}};
  j["mass_props"] = {{"mass", s.mass_props.mass},
                     {"inertia_zz", s.mass_props.inertia_zz},
                     {"com_offset", vec_json(s.mass_props.com_offset)}};
  j["damping"] = {{"linear", s.damping.linear},
                  {"quadratic", s.damping.quadratic}};
  Json a;
  std::visit(overloaded{
                 [&](const FloatingPlatformParams& p) {
                   a["type"] = "floating_platform";
                   a["thruster_positions"] = vecs_json(p.thruster_positions);
                   a["thruster_directions"] = vecs_json(p.thruster_directions);
                   a["thrust_force"] = p.thrust_force;
                 },
                 [&](const KingfisherParams& p) {
                   a["type"] = "kingfisher";
                   a["propeller_positions"] = vecs_json(p.propeller_positions);
                   a["max_thrust_fwd"] = p.max_thrust_fwd;
                   a["max_thrust_rev"] = p.max_thrust_rev;
                   a["first_order_lag_tau"] = p.first_order_lag_tau;
                 },
                 [&](const Turtlebot2Params& p) {
                   a["type"] = "turtlebot2";
                   a["wheel_base"] = p.wheel_base;
                   a["v_cmd_max"] = p.v_cmd_max;
                   a["omega_cmd_max"] = p.omega_cmd_max;
                   a["velocity_tracking_gain"] = p.velocity_tracking_gain;
                 }},
             s.actuation);
  j["actuation"] = a;
  j["vel_limits"] = {{"v_max", s.vel_limits.v_max},
                     {"omega_max", s.vel_limits.omega_max}};
  j["shaping_weight"] = s.shaping.weight;
  j["runaway_factor"] = s.runaway_factor;
  j["body_radius"] = s.body_radius;
  j["velocity_reference"] = {{"v_min", s.velocity_reference.v_min},
                             {"v_max", s.velocity_reference.v_max},
                             {"omega_max", s.velocity_reference.omega_max}};
  j["randomization"] = to_json(s.randomization);
  return j;
}

void merge_json(const Json& j, RobotSpec& s, const std::string& path) {
  Obj o(j, path);
  o("name", s.name);
  if (const Json* cs = o.find("control_space")) {
    Obj c(*cs, join(path, "control_space"));
    c("kind", s.control_space.kind);
    c("dim", s.control_space.dim);
  }
  if (const Json* mp = o.find("mass_props")) {
    Obj m(*mp, join(path, "mass_props"));
    m("mass", s.mass_props.mass);
    m("inertia_zz", s.mass_props.inertia_zz);
    m("com_offset", s.mass_props.com_offset);
  }
  if (const Json* d = o.find("damping")) {
    Obj m(*d, join(path, "damping"));
    m("linear", s.damping.linear);
    m("quadratic", s.damping.quadratic);
  }
  if (const Json* act = o.find("actuation")) {
    const std::string ap = join(path, "actuation");
    Obj m(*act, ap);
    std::string type;
    m("type", type);
    // A type switch starts from that actuator's defaults.
    if (type == "floating_platform") {
      if (!std::holds_alternative<FloatingPlatformParams>(s.actuation)) {
        s.actuation = default_thruster_layout(0.25, 1.0);
      }
    } else if (type == "kingfisher") {
      if (!std::holds_alternative<KingfisherParams>(s.actuation)) {
        s.actuation = std::get<KingfisherParams>(
            default_robot_spec("kingfisher").actuation);
      }
    } else if (type == "turtlebot2") {
      if (!std::holds_alternative<Turtlebot2Params>(s.actuation)) {
        s.actuation = Turtlebot2Params{};
      }
    } else if (!type.empty()) {
      throw ConfigError(ap + ".type: unknown actuator '" + type + "'");
    }
    std::visit(overloaded{
                   [&](FloatingPlatformParams& p) {
                     m("thruster_positions", p.thruster_positions);
                     m("thruster_directions", p.thruster_directions);
                     m("thrust_force", p.thrust_force);
                   },
                   [&](KingfisherParams& p) {
                     m("propeller_positions", p.propeller_positions);
                     m("max_thrust_fwd", p.max_thrust_fwd);
                     m("max_thrust_rev", p.max_thrust_rev);
                     m("first_order_lag_tau", p.first_order_lag_tau);
                   },
                   [&](Turtlebot2Params& p) {
                     m("wheel_base", p.wheel_base);
                     m("v_cmd_max", p.v_cmd_max);
                     m("omega_cmd_max", p.omega_cmd_max);
                     m("velocity_tracking_gain", p.velocity_tracking_gain);
                   }},
               s.actuation);
  }
  if (const Json* v = o.find("vel_limits")) {
    Obj m(*v, join(path, "vel_limits"));
    m("v_max", s.vel_limits.v_max);
    m("omega_max", s.vel_limits.omega_max);
  }
  o("shaping_weight", s.shaping.weight);
  o("runaway_factor", s.runaway_factor);
  o("body_radius", s.body_radius);
  if (const Json* v = o.find("velocity_reference")) {
    Obj m(*v, join(path, "velocity_reference"));
    m("v_min", s.velocity_reference.v_min);
    m("v_max", s.velocity_reference.v_max);
    m("omega_max", s.velocity_reference.omega_max);
  }
  o.nested("randomization", s.randomization);
}

Json to_json(const RewardCoefficients& c) {
  Json j;
  j["decay"] = {{"lambda1_dist", c.decay.lambda1_dist},
                {"lambda2_head", c.decay.lambda2_head},
                {"lambda3_bnd", c.decay.lambda3_bnd},
                {"lambda4_vel_err", c.decay.lambda4_vel_err}};
  const auto& p = c.goto_position;
  j["goto_position"] = {{"alpha_i1_pos", p.alpha_i1_pos},
                        {"alpha_i2_head", p.alpha_i2_head},
                        {"alpha_j1_lin_vel", p.alpha_j1_lin_vel},
                        {"alpha_j2_ang_vel", p.alpha_j2_ang_vel},
                        {"alpha_bns1_bonus", p.alpha_bns1_bonus}};
  const auto& q = c.goto_pose;
  j["goto_pose"] = {{"beta_i1_pose_align", q.beta_i1_pose_align},
                    {"beta_j1_lin_vel", q.beta_j1_lin_vel},
                    {"beta_j2_ang_vel", q.beta_j2_ang_vel},
                    {"beta_bns1_boundary", q.beta_bns1_boundary},
                    {"beta_pg1_progress", q.beta_pg1_progress}};
  const auto& g = c.go_through_positions;
  j["go_through_positions"] = {{"phi_i1_progress", g.phi_i1_progress},
                               {"phi_i2_head", g.phi_i2_head},
                               {"phi_j1_lin_vel", g.phi_j1_lin_vel},
                               {"phi_j2_ang_vel", g.phi_j2_ang_vel},
                               {"phi_bns1_bonus", g.phi_bns1_bonus}};
  const auto& t = c.track_velocities;
  j["track_velocities"] = {{"gamma_i1_lin_vel_err", t.gamma_i1_lin_vel_err},
                           {"gamma_i2_ang_vel_err", t.gamma_i2_ang_vel_err},
                           {"gamma_i3_bonus", t.gamma_i3_bonus},
                           {"gamma_bns1_boundary", t.gamma_bns1_boundary}};
  const auto& e = c.extras;
  j["extras"] = {{"lin_vel_clip", range_json(e.lin_vel_clip)},
                 {"ang_vel_clip", range_json(e.ang_vel_clip)},
                 {"boundary_proximity_weight", e.boundary_proximity_weight},
                 {"waypoint_bonus", e.waypoint_bonus},
                 {"track_velocities_exponential",
                  e.track_velocities_exponential}};
  return j;
}

void merge_json(const Json& j, RewardCoefficients& c,
                const std::string& path) {
  Obj o(j, path);
  if (const Json* d = o.find("decay")) {
    Obj m(*d, join(path, "decay"));
    m("lambda1_dist", c.decay.lambda1_dist);
    m("lambda2_head", c.decay.lambda2_head);
    m("lambda3_bnd", c.decay.lambda3_bnd);
    m("lambda4_vel_err", c.decay.lambda4_vel_err);
  }
  if (const Json* d = o.find("goto_position")) {
    Obj m(*d, join(path, "goto_position"));
    auto& p = c.goto_position;
    m("alpha_i1_pos", p.alpha_i1_pos);
    m("alpha_i2_head", p.alpha_i2_head);
    m("alpha_j1_lin_vel", p.alpha_j1_lin_vel);
    m("alpha_j2_ang_vel", p.alpha_j2_ang_vel);
    m("alpha_bns1_bonus", p.alpha_bns1_bonus);
  }
  if (const Json* d = o.find("goto_pose")) {
    Obj m(*d, join(path, "goto_pose"));
    auto& p = c.goto_pose;
    m("beta_i1_pose_align", p.beta_i1_pose_align);
    m("beta_j1_lin_vel", p.beta_j1_lin_vel);
    m("beta_j2_ang_vel", p.beta_j2_ang_vel);
    m("beta_bns1_boundary", p.beta_bns1_boundary);
    m("beta_pg1_progress", p.beta_pg1_progress);
  }
  if (const Json* d = o.find("go_through_positions")) {
    Obj m(*d, join(path, "go_through_positions"));
    auto& p = c.go_through_positions;
    m("phi_i1_progress", p.phi_i1_progress);
    m("phi_i2_head", p.phi_i2_head);
    m("phi_j1_lin_vel", p.phi_j1_lin_vel);
    m("phi_j2_ang_vel", p.phi_j2_ang_vel);
    m("phi_bns1_bonus", p.phi_bns1_bonus);
  }
  if (const Json* d = o.find("track_velocities")) {
    Obj m(*d, join(path, "track_velocities"));
    auto& p = c.track_velocities;
    m("gamma_i1_lin_vel_err", p.gamma_i1_lin_vel_err);
    m("gamma_i2_ang_vel_err", p.gamma_i2_ang_vel_err);
    m("gamma_i3_bonus", p.gamma_i3_bonus);
    m("gamma_bns1_boundary", p.gamma_bns1_boundary);
  }
  if (const Json* d = o.find("extras")) {
    Obj m(*d, join(path, "extras"));
    auto& e = c.extras;
    m("lin_vel_clip", e.lin_vel_clip);
    m("ang_vel_clip", e.ang_vel_clip);
    m("boundary_proximity_weight", e.boundary_proximity_weight);
    m("waypoint_bonus", e.waypoint_bonus);
    m("track_velocities_exponential", e.track_velocities_exponential);
  }
}

Json to_json(const SuccessThresholds& t) {
  return {{"eps_p", t.eps_p},
          {"eps_theta_deg", t.eps_theta_deg},
          {"eps_tp", t.eps_tp},
          {"eps_v", t.eps_v},
          {"eps_w_deg_s", t.eps_w_deg_s}};
}

void merge_json(const Json& j, SuccessThresholds& t, const std::string& path) {
  Obj o(j, path);
  o("eps_p", t.eps_p);
  o("eps_theta_deg", t.eps_theta_deg);
  o("eps_tp", t.eps_tp);
  o("eps_v", t.eps_v);
  o("eps_w_deg_s", t.eps_w_deg_s);
}

Json to_json(const TaskConfig& t) {
  Json j;
  j["coefficients"] = to_json(t.coefficients);
  j["thresholds"] = to_json(t.thresholds);
  j["future_goals"] = t.future_goals;
  j["num_waypoints"] = t.num_waypoints;
  j["waypoint_distance"] = range_json(t.waypoint_distance);
  j["waypoint_bearing_halfwidth"] = t.waypoint_bearing_halfwidth;
  j["waypoint_margin"] = t.waypoint_margin;
  j["num_obstacles"] = t.num_obstacles;
  j["obstacle_radius"] = range_json(t.obstacle_radius);
  j["obstacle_clearance"] = t.obstacle_clearance;
  j["velocity_reference"] = {
      {"resample_interval", range_json(t.velocity_reference.resample_interval)},
      {"ramp_time", t.velocity_reference.ramp_time},
      {"constant_profile", t.velocity_reference.constant_profile}};
  j["max_sampling_attempts"] = t.max_sampling_attempts;
  return j;
}

void merge_json(const Json& j, TaskConfig& t, const std::string& path) {
  Obj o(j, path);
  o.nested("coefficients", t.coefficients);
  o.nested("thresholds", t.thresholds);
  o("future_goals", t.future_goals);
  o("num_waypoints", t.num_waypoints);
  o("waypoint_distance", t.waypoint_distance);
  o("waypoint_bearing_halfwidth", t.waypoint_bearing_halfwidth);
  o("waypoint_margin", t.waypoint_margin);
  o("num_obstacles", t.num_obstacles);
  o("obstacle_radius", t.obstacle_radius);
  o("obstacle_clearance", t.obstacle_clearance);
  if (const Json* v = o.find("velocity_reference")) {
    Obj m(*v, join(path, "velocity_reference"));
    m("resample_interval", t.velocity_reference.resample_interval);
    m("ramp_time", t.velocity_reference.ramp_time);
    m("constant_profile", t.velocity_reference.constant_profile);
  }
  o("max_sampling_attempts", t.max_sampling_attempts);
}

Json to_json(const EnvConfig& c) {
  Json j;
  j["robot"] = c.robot;
  j["task"] = c.task;
  j["num_envs"] = c.num_envs;
  j["seed"] = c.seed;
  j["dt"] = c.dt;
  j["decimation"] = c.decimation;
  j["max_episode_steps"] = c.max_episode_steps;
  j["arena"] = c.arena ? Json{{"radius", c.arena->radius},
                              {"spawn_radius", c.arena->spawn_radius}}
                       : Json(nullptr);
  j["task_params"] = to_json(c.task_params);
  j["robot_override"] = c.robot_override ? to_json(*c.robot_override)
                                         : Json(nullptr);
  j["randomization"] = c.randomization ? to_json(*c.randomization)
                                       : Json(nullptr);
  j["clamp_twist"] = c.clamp_twist;
  j["chunk_size"] = c.chunk_size;
  j["workers"] = c.workers;
  Json comp = Json::array();
  for (const auto& r : c.compatibility) {
    comp.push_back({{"robot", r.robot}, {"task", r.task}, {"allowed", r.allowed}});
  }
  j["compatibility"] = comp;
  return j;
}

void merge_json(const Json& j, EnvConfig& c, const std::string& path) {
  Obj o(j, path);
  o("robot", c.robot);
  o("task", c.task);
  o("num_envs", c.num_envs);
  o("seed", c.seed);
  o("dt", c.dt);
  o("decimation", c.decimation);
  o("max_episode_steps", c.max_episode_steps);
  if (const Json* a = o.find("arena")) {
    if (a->is_null()) {
      c.arena.reset();
    } else {
      ArenaSpec arena = c.arena.value_or(default_arena(parse_task_kind(c.task)));
      Obj m(*a, join(path, "arena"));
      m("radius", arena.radius);
      m("spawn_radius", arena.spawn_radius);
      c.arena = arena;
    }
  }
  o.nested("task_params", c.task_params);
  if (const Json* r = o.find("robot_override")) {
    if (r->is_null()) {
      c.robot_override.reset();
    } else {
      RobotSpec spec = c.robot_override.value_or(default_robot_spec(c.robot));
      merge_json(*r, spec, join(path, "robot_override"));
      c.robot_override = spec;
    }
  }
  if (const Json* r = o.find("randomization")) {
    if (r->is_null()) {
      c.randomization.reset();
    } else {
      RandomizationConfig dr = c.randomization.value_or(
          default_robot_spec(c.robot).randomization);
      merge_json(*r, dr, join(path, "randomization"));
      c.randomization = dr;
    }
  }
  o("clamp_twist", c.clamp_twist);
  o("chunk_size", c.chunk_size);
  o("workers", c.workers);
  if (const Json* a = o.find("compatibility")) {
    const std::string cp = join(path, "compatibility");
    if (!a->is_array()) type_error(cp, "an array");
    c.compatibility.clear();
    for (size_t i = 0; i < a->size(); ++i) {
      CompatibilityOverride r;
      Obj m((*a)[i], cp + "[" + std::to_string(i) + "]");
      m("robot", r.robot);
      m("task", r.task);
      m("allowed", r.allowed);
      c.compatibility.push_back(r);
    }
  }
}

Json to_json(const PPOConfig& c) {
  return {{"rollouts", c.rollouts},
          {"epochs", c.epochs},
          {"minibatches", c.minibatches},
          {"gamma", c.gamma},
          {"gae_lambda", c.gae_lambda},
          {"lr", c.lr},
          {"kl_threshold", c.kl_threshold},
          {"lr_min", c.lr_min},
          {"lr_max", c.lr_max},
          {"kl_factor", c.kl_factor},
          {"lr_factor", c.lr_factor},
          {"grad_norm_clip", c.grad_norm_clip},
          {"ratio_clip", c.ratio_clip},
          {"value_clip", c.value_clip},
          {"clip_predicted_values", c.clip_predicted_values},
          {"value_loss_coef", c.value_loss_coef},
          {"entropy_coef", c.entropy_coef},
          {"kl_early_stop", c.kl_early_stop},
          {"time_limit_bootstrap", c.time_limit_bootstrap},
          {"standardize_advantages", c.standardize_advantages},
          {"scaler_clip", c.scaler_clip},
          {"adam_beta1", c.adam_beta1},
          {"adam_beta2", c.adam_beta2},
          {"adam_eps", c.adam_eps}};
}

void merge_json(const Json& j, PPOConfig& c, const std::string& path) {
  Obj o(j, path);
  o("rollouts", c.rollouts);
  o("epochs", c.epochs);
  o("minibatches", c.minibatches);
  o("gamma", c.gamma);
  o("gae_lambda", c.gae_lambda);
  o("lr", c.lr);
  o("kl_threshold", c.kl_threshold);
  o("lr_min", c.lr_min);
  o("lr_max", c.lr_max);
  o("kl_factor", c.kl_factor);
  o("lr_factor", c.lr_factor);
  o("grad_norm_clip", c.grad_norm_clip);
  o("ratio_clip", c.ratio_clip);
  o("value_clip", c.value_clip);
  o("clip_predicted_values", c.clip_predicted_values);
  o("value_loss_coef", c.value_loss_coef);
  o("entropy_coef", c.entropy_coef);
  o("kl_early_stop", c.kl_early_stop);
  o("time_limit_bootstrap", c.time_limit_bootstrap);
  o("standardize_advantages", c.standardize_advantages);
  o("scaler_clip", c.scaler_clip);
  o("adam_beta1", c.adam_beta1);
  o("adam_beta2", c.adam_beta2);
  o("adam_eps", c.adam_eps);
}

Json to_json(const PolicySpec& p) {
  return {{"hidden_layers", p.hidden_layers},
          {"activation", to_string(p.activation)},
          {"head", to_string(p.head)},
          {"init_log_std", p.init_log_std},
          {"min_log_std", p.min_log_std},
          {"max_log_std", p.max_log_std}};
}

void merge_json(const Json& j, PolicySpec& p, const std::string& path) {
  Obj o(j, path);
  o("hidden_layers", p.hidden_layers);
  o("activation", p.activation);
  o("head", p.head);
  o("init_log_std", p.init_log_std);
  o("min_log_std", p.min_log_std);
  o("max_log_std", p.max_log_std);
}

Json to_json(const MetricsConfig& m) {
  return {{"hold_window", m.hold_window},
          {"time_in_seconds", m.time_in_seconds},
          {"min_goals_for_success", m.min_goals_for_success},
          {"trace_episodes", m.trace_episodes}};
}

void merge_json(const Json& j, MetricsConfig& m, const std::string& path) {
  Obj o(j, path);
  o("hold_window", m.hold_window);
  o("time_in_seconds", m.time_in_seconds);
  o("min_goals_for_success", m.min_goals_for_success);
  o("trace_episodes", m.trace_episodes);
}

Json to_json(const TrainConfig& c) {
  Json j;
  j["env"] = to_json(c.env);
  j["ppo"] = to_json(c.ppo);
  j["policy"] = to_json(c.policy);
  j["epochs"] = c.epochs;
  j["desync_episodes"] = c.desync_episodes;
  j["metrics"] = to_json(c.metrics);
  return j;
}

void merge_json(const Json& j, TrainConfig& c, const std::string& path) {
  Obj o(j, path);
  o.nested("env", c.env);
  o.nested("ppo", c.ppo);
  o.nested("policy", c.policy);
  o("epochs", c.epochs);
  o("desync_episodes", c.desync_episodes);
  o.nested("metrics", c.metrics);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ConfigError("failed writing " + path);
}

}  // namespace navforge
