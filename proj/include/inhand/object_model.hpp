#pragma once

#include "inhand/geometry.hpp"
#include "inhand/plan.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace inhand {

/// Stochastic response of one mode: the commanded axis moves by
/// gain * magnitude with gain ~ N(gain_mean, gain_std); every other axis
/// receives zero-mean coupling noise plus an optional systematic bias.
struct ModeResponse {
  double gain_mean = 1.0;
  double gain_std = 0.0;
  Vec3 rot_coupling_std = Vec3::Zero();    // rad per action, per axis
  Vec3 trans_coupling_std = Vec3::Zero();  // m per action, per axis
  Vec3 rot_bias = Vec3::Zero();            // rad per action
  Vec3 trans_bias = Vec3::Zero();          // m per action
};

/// One-dimensional yaw basin the object settles into when the grasp
/// transfers between finger pairs. `period` is the yaw spacing of equivalent
/// basin centers (pi/2 for a cube's faces). Offsets beyond capture_range
/// drop the object.
struct RegraspBasin {
  double center_offset = 0.0;  // rad
  double pull_strength = 0.0;  // fraction of the offset removed, [0, 1]
  double capture_range = kPi;  // rad
  double noise_std = 0.0;      // rad
  double period = 2.0 * kPi;   // rad
};

/// Roll interval in which RotX actions stall with probability
/// 1 - escape_probability (fingers caught on the geometry).
struct StuckRegion {
  double roll_min = 0.0;
  double roll_max = 0.0;
  double escape_probability = 1.0;
};

struct ObjectModel {
  std::string name = "object";
  std::array<ModeResponse, 4> response{};  // indexed by Mode
  double slip_probability = 0.0;
  double slip_magnitude_std = 0.0;  // rad, drawn on a random rotation axis
  RegraspBasin basin;
  std::vector<StuckRegion> stuck_states;

  ModeResponse& mode_response(Mode m) {
    return response[static_cast<std::size_t>(m)];
  }
  const ModeResponse& mode_response(Mode m) const {
    return response[static_cast<std::size_t>(m)];
  }

  void validate() const {
    for (const auto& r : response) {
      if (!(r.gain_mean > 0.0) || r.gain_mean > 1.5) {
        throw std::invalid_argument(name + ": gain_mean must be in (0, 1.5]");
      }
      if (r.gain_std < 0.0) {
        throw std::invalid_argument(name + ": gain_std must be >= 0");
      }
    }
    if (slip_probability < 0.0 || slip_probability > 1.0) {
      throw std::invalid_argument(name + ": slip_probability out of [0, 1]");
    }
    if (basin.pull_strength < 0.0 || basin.pull_strength > 1.0) {
      throw std::invalid_argument(name + ": pull_strength out of [0, 1]");
    }
    if (!(basin.capture_range >= 0.0) || !(basin.period > 0.0)) {
      throw std::invalid_argument(name + ": bad basin geometry");
    }
    for (const auto& s : stuck_states) {
      if (s.escape_probability < 0.0 || s.escape_probability > 1.0) {
        throw std::invalid_argument(name + ": escape_probability out of [0, 1]");
      }
    }
  }

  static ObjectModel preset(std::string_view name);
  static const std::vector<std::string>& preset_names();
};

/// 6D pose tracker emulation parameters.
struct TrackerModel {
  double rot_noise_std_deg = 2.0;
  double trans_noise_std_mm = 1.5;
  double rate_hz = 60.0;
  int latency_ticks = 0;
};

namespace detail {

inline ObjectModel make_ideal() {
  ObjectModel m;
  m.name = "ideal";
  return m;  // unit gains, zero noise: exact kinematic integrator
}

inline void set_common_rot_coupling(ObjectModel& m, double pitch_std,
                                    double other_std) {
  for (Mode mode : {Mode::RotX, Mode::RotZ, Mode::TransY, Mode::TransZ}) {
    auto& r = m.mode_response(mode);
    r.rot_coupling_std = Vec3(other_std, pitch_std, other_std);
    // The commanded rotation axis gets its noise through gain_std instead.
    if (mode == Mode::RotX) r.rot_coupling_std.x() = 0.0;
    if (mode == Mode::RotZ) r.rot_coupling_std.z() = 0.0;
  }
}

inline void set_common_trans_coupling(ObjectModel& m, double x_std,
                                      double other_std) {
  for (Mode mode : {Mode::RotX, Mode::RotZ, Mode::TransY, Mode::TransZ}) {
    auto& r = m.mode_response(mode);
    r.trans_coupling_std = Vec3(x_std, other_std, other_std);
    if (mode == Mode::TransY) r.trans_coupling_std.y() = 0.0;
    if (mode == Mode::TransZ) r.trans_coupling_std.z() = 0.0;
  }
}

inline ObjectModel make_cube() {
  ObjectModel m;
  m.name = "cube";
  for (auto& r : m.response) {
    r.gain_mean = 0.93;
    r.gain_std = 0.04;
  }
  // x translation and pitch are the least constrained dimensions.
  set_common_rot_coupling(m, deg_to_rad(0.15), deg_to_rad(0.08));
  set_common_trans_coupling(m, 0.0005, 0.00025);
  // Gravity sag: x-rotations let the object sink toward the palm.
  m.mode_response(Mode::RotX).trans_bias = Vec3(0.0, 0.0, -0.00045);
  m.slip_probability = 0.03;
  m.slip_magnitude_std = deg_to_rad(1.0);
  m.basin = {0.0, 0.25, 0.85, deg_to_rad(0.8), kPi / 2.0};
  return m;
}

inline ObjectModel make_sphere() {
  ObjectModel m;
  m.name = "sphere";
  for (auto& r : m.response) {
    r.gain_mean = 1.0;
    r.gain_std = 0.02;
  }
  set_common_rot_coupling(m, deg_to_rad(0.10), deg_to_rad(0.05));
  set_common_trans_coupling(m, 0.0003, 0.00015);
  m.mode_response(Mode::RotX).trans_bias = Vec3(0.0, 0.0, -0.00030);
  m.slip_probability = 0.01;
  m.slip_magnitude_std = deg_to_rad(0.8);
  // Rotationally symmetric: every grasp is a minimum-energy grasp.
  m.basin = {0.0, 0.0, kPi, 0.0, 2.0 * kPi};
  return m;
}

inline ObjectModel make_truck() {
  ObjectModel m;
  m.name = "truck";
  for (auto& r : m.response) {
    r.gain_mean = 0.95;
    r.gain_std = 0.04;
  }
  set_common_rot_coupling(m, deg_to_rad(0.15), deg_to_rad(0.08));
  set_common_trans_coupling(m, 0.0005, 0.00025);
  m.mode_response(Mode::RotX).trans_bias = Vec3(0.0, 0.0, -0.00040);
  m.slip_probability = 0.02;
  m.slip_magnitude_std = deg_to_rad(1.0);
  m.basin = {0.0, 0.30, 1.70, deg_to_rad(1.0), kPi};
  return m;
}

inline ObjectModel make_bunny() {
  ObjectModel m;
  m.name = "bunny";
  for (auto& r : m.response) {
    r.gain_mean = 0.85;
    r.gain_std = 0.09;
  }
  set_common_rot_coupling(m, deg_to_rad(0.25), deg_to_rad(0.12));
  set_common_trans_coupling(m, 0.0007, 0.00035);
  m.mode_response(Mode::RotX).trans_bias = Vec3(0.0, 0.0, -0.00050);
  m.slip_probability = 0.06;
  m.slip_magnitude_std = deg_to_rad(2.5);
  m.basin = {0.0, 0.30, 0.80, deg_to_rad(1.5), 2.0 * kPi};
  // Fingers catch behind the ears through part of the roll range.
  m.stuck_states.push_back({0.6, 1.2, 0.35});
  return m;
}

inline ObjectModel make_duck() {
  ObjectModel m;
  m.name = "duck";
  for (auto& r : m.response) {
    r.gain_mean = 0.90;
    r.gain_std = 0.06;
  }
  // The head shifts the center of mass; x-rotations are the most dynamic.
  m.mode_response(Mode::RotX).gain_mean = 0.75;
  m.mode_response(Mode::RotX).gain_std = 0.15;
  set_common_rot_coupling(m, deg_to_rad(0.25), deg_to_rad(0.12));
  set_common_trans_coupling(m, 0.0006, 0.00030);
  m.mode_response(Mode::RotX).trans_bias = Vec3(0.0, 0.0, -0.00050);
  m.slip_probability = 0.10;
  m.slip_magnitude_std = deg_to_rad(3.0);
  m.basin = {0.0, 0.30, 0.85, deg_to_rad(1.5), 2.0 * kPi};
  return m;
}

}  // namespace detail

inline ObjectModel ObjectModel::preset(std::string_view name) {
  if (name == "ideal") return detail::make_ideal();
  if (name == "cube") return detail::make_cube();
  if (name == "sphere") return detail::make_sphere();
  if (name == "truck") return detail::make_truck();
  if (name == "bunny") return detail::make_bunny();
  if (name == "duck") return detail::make_duck();
  throw std::invalid_argument("unknown object preset: " + std::string(name));
}

inline const std::vector<std::string>& ObjectModel::preset_names() {
  static const std::vector<std::string> names = {"ideal",  "cube", "sphere",
                                                 "truck",  "bunny", "duck"};
  return names;
}

}  // namespace inhand
