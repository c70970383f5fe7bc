#pragma once

#include "inhand/geometry.hpp"
#include "inhand/interfaces.hpp"
#include "inhand/object_model.hpp"
#include "inhand/plan.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace inhand {

/// Thrown when a grasp transfer starts outside the basin's capture range and
/// the object falls out of the hand. Terminal for the episode.
class DropFailure : public std::runtime_error {
 public:
  explicit DropFailure(const std::string& what) : std::runtime_error(what) {}
};

enum class GraspPair { DifferentialPair, IndividualPair };

enum class PerturbAxis { RotX, RotY, RotZ, TransX, TransY, TransZ };

inline const char* perturb_axis_name(PerturbAxis a) {
  switch (a) {
    case PerturbAxis::RotX: return "rot_x";
    case PerturbAxis::RotY: return "rot_y";
    case PerturbAxis::RotZ: return "rot_z";
    case PerturbAxis::TransX: return "trans_x";
    case PerturbAxis::TransY: return "trans_y";
    case PerturbAxis::TransZ: return "trans_z";
  }
  return "?";
}

/// Externally injected pose displacement, applied atomically between ticks.
struct Perturbation {
  double time = 0.0;
  PerturbAxis axis = PerturbAxis::RotX;
  double magnitude = 0.0;  // rad or m
};

struct PlantState {
  Pose true_pose;
  double palm_joint = 0.0;  // rad, within +/- 55 deg
  GraspPair grasp_pair = GraspPair::DifferentialPair;
  double clock = 0.0;  // s
  bool dropped = false;
};

/// Simulated compliant hand-object system. Executes the four modes with
/// stochastic gains, cross-axis coupling and slip; models the palm's rotary
/// joint limit with automatic grasp transfers into a minimum-energy yaw
/// basin. All randomness flows from the constructor seed; the same seed and
/// action sequence reproduce the state trajectory bit-exactly.
///
/// Owned and mutated by exactly one driver at a time.
class CompliantPlant : public PlantHandle {
 public:
  static constexpr double kPalmLimit = deg_to_rad(55.0);
  static constexpr double kMaxRotStep = deg_to_rad(7.0);
  static constexpr double kMaxTransStep = 0.02;

  CompliantPlant(ObjectModel model, const Pose& initial_pose,
                 std::uint64_t seed)
      : model_(std::move(model)), rng_(seed) {
    model_.validate();
    if (!initial_pose.position.allFinite()) {
      throw std::invalid_argument("CompliantPlant: non-finite initial pose");
    }
    state_.true_pose = initial_pose;
    history_.push_back(initial_pose);
  }

  const ObjectModel& model() const { return model_; }
  const PlantState& state() const { return state_; }
  double clock() const override { return state_.clock; }
  const std::vector<Pose>& history() const { return history_; }
  int regrasp_count() const { return regrasp_count_; }

  /// Advances the true pose by one modal action. RotZ actions drive the palm
  /// joint and trigger a regrasp whenever the commanded step would leave the
  /// +/- 55 deg range.
  void mode_action(const ModeAction& action) override {
    if (state_.dropped) {
      throw DropFailure(model_.name + ": object already dropped");
    }
    validate_action(action);
    const ModeResponse& resp = model_.mode_response(action.mode);

    bool stalled = false;
    if (action.mode == Mode::RotX && !model_.stuck_states.empty()) {
      const double roll = state_.true_pose.orientation.rpy().x();
      for (const auto& region : model_.stuck_states) {
        if (roll >= region.roll_min && roll <= region.roll_max) {
          if (uniform() > region.escape_probability) stalled = true;
          break;
        }
      }
    }

    const double gain = resp.gain_std > 0.0
                            ? normal(resp.gain_mean, resp.gain_std)
                            : resp.gain_mean;
    const double effective = stalled ? 0.0 : gain * action.magnitude;

    switch (action.mode) {
      case Mode::RotX:
        rotate(Axis::X, effective);
        break;
      case Mode::RotZ: {
        if (std::abs(state_.palm_joint + action.magnitude) > kPalmLimit) {
          regrasp();
        }
        state_.palm_joint += action.magnitude;
        rotate(Axis::Z, effective);
        break;
      }
      case Mode::TransY:
        state_.true_pose.position.y() += effective;
        break;
      case Mode::TransZ:
        state_.true_pose.position.z() += effective;
        break;
    }

    apply_coupling(resp);

    if (model_.slip_probability > 0.0 && uniform() < model_.slip_probability) {
      const int axis = static_cast<int>(uniform() * 3.0) % 3;
      const double slip = model_.slip_magnitude_std > 0.0
                              ? normal(0.0, model_.slip_magnitude_std)
                              : 0.0;
      rotate(static_cast<Axis>(axis), slip);
    }

    state_.clock += kActionPeriod;
    history_.push_back(state_.true_pose);
  }

  /// Transfers the grasp to the opposite finger pair. The object's yaw falls
  /// toward the nearest basin center by pull_strength of its offset (plus
  /// basin noise); offsets beyond capture_range drop the object.
  void regrasp() {
    if (state_.dropped) {
      throw DropFailure(model_.name + ": object already dropped");
    }
    const double dev = basin_offset();
    if (std::abs(dev) > model_.basin.capture_range) {
      state_.dropped = true;
      throw DropFailure(model_.name + ": transfer outside capture range");
    }
    double new_dev = dev * (1.0 - model_.basin.pull_strength);
    if (model_.basin.noise_std > 0.0) {
      new_dev += normal(0.0, model_.basin.noise_std);
    }
    rotate(Axis::Z, new_dev - dev);
    state_.grasp_pair = state_.grasp_pair == GraspPair::DifferentialPair
                            ? GraspPair::IndividualPair
                            : GraspPair::DifferentialPair;
    state_.palm_joint = 0.0;
    ++regrasp_count_;
  }

  /// Displaces the true pose along the named axis. No other state changes.
  void apply_perturbation(const Perturbation& p) {
    if (!std::isfinite(p.magnitude)) {
      throw std::invalid_argument("apply_perturbation: non-finite magnitude");
    }
    switch (p.axis) {
      case PerturbAxis::RotX: rotate(Axis::X, p.magnitude); break;
      case PerturbAxis::RotY: rotate(Axis::Y, p.magnitude); break;
      case PerturbAxis::RotZ: rotate(Axis::Z, p.magnitude); break;
      case PerturbAxis::TransX: state_.true_pose.position.x() += p.magnitude; break;
      case PerturbAxis::TransY: state_.true_pose.position.y() += p.magnitude; break;
      case PerturbAxis::TransZ: state_.true_pose.position.z() += p.magnitude; break;
    }
  }

  /// True iff the object's deviation from the current basin center is
  /// strictly within min(rho, capture_range).
  bool check_safe_transfer(double rho) const {
    const double dev = std::abs(basin_offset());
    return dev < std::min(rho, model_.basin.capture_range);
  }

  /// Signed yaw offset from the nearest basin center, in
  /// (-period/2, period/2].
  double basin_offset() const {
    const double yaw = state_.true_pose.orientation.rpy().z();
    const double period = model_.basin.period;
    double rem =
        std::remainder(yaw - model_.basin.center_offset, period);
    if (rem <= -period / 2.0) rem += period;
    return rem;
  }

 private:
  void validate_action(const ModeAction& a) const {
    if (!std::isfinite(a.magnitude)) {
      throw std::invalid_argument("mode_action: non-finite magnitude");
    }
    const double limit =
        is_rotation_mode(a.mode) ? kMaxRotStep : kMaxTransStep;
    if (std::abs(a.magnitude) > limit) {
      throw std::invalid_argument("mode_action: magnitude exceeds step limit");
    }
  }

  void rotate(Axis axis, double angle) {
    if (angle == 0.0) return;
    state_.true_pose.orientation =
        rot_about_axis(axis, angle) * state_.true_pose.orientation;
  }

  void apply_coupling(const ModeResponse& resp) {
    Vec3 rot = resp.rot_bias;
    Vec3 trans = resp.trans_bias;
    for (int i = 0; i < 3; ++i) {
      if (resp.rot_coupling_std[i] > 0.0) {
        rot[i] += normal(0.0, resp.rot_coupling_std[i]);
      }
      if (resp.trans_coupling_std[i] > 0.0) {
        trans[i] += normal(0.0, resp.trans_coupling_std[i]);
      }
    }
    if (rot != Vec3::Zero()) {
      state_.true_pose.orientation = rot_about_axis(Axis::Z, rot.z()) *
                                     rot_about_axis(Axis::Y, rot.y()) *
                                     rot_about_axis(Axis::X, rot.x()) *
                                     state_.true_pose.orientation;
    }
    state_.true_pose.position += trans;
  }

  double normal(double mean, double std) {
    std::normal_distribution<double> d(mean, std);
    return d(rng_);
  }

  double uniform() {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    return d(rng_);
  }

  ObjectModel model_;
  PlantState state_;
  std::mt19937_64 rng_;
  std::vector<Pose> history_;
  int regrasp_count_ = 0;
};

/// Pull-based tracker emulation: the true pose from `latency_ticks` actions
/// ago plus independent per-axis Gaussian noise.
class TrackerEmulator : public TrackerHandle {
 public:
  TrackerEmulator(const CompliantPlant& plant, TrackerModel model,
                  std::uint64_t seed)
      : plant_(plant), model_(model), rng_(seed) {}

  Pose perceive() override {
    Pose base;
    if (model_.latency_ticks <= 0) {
      base = plant_.state().true_pose;
    } else {
      const auto& h = plant_.history();
      const std::size_t last = h.size() - 1;
      const std::size_t lag = static_cast<std::size_t>(model_.latency_ticks);
      base = h[last >= lag ? last - lag : 0];
    }
    const double rot_std = deg_to_rad(model_.rot_noise_std_deg);
    const double trans_std = model_.trans_noise_std_mm * 1e-3;
    Pose out = base;
    if (rot_std > 0.0) {
      const double nx = normal(rot_std), ny = normal(rot_std),
                   nz = normal(rot_std);
      out.orientation = rot_about_axis(Axis::Z, nz) *
                        rot_about_axis(Axis::Y, ny) *
                        rot_about_axis(Axis::X, nx) * base.orientation;
    }
    if (trans_std > 0.0) {
      out.position += Vec3(normal(trans_std), normal(trans_std),
                           normal(trans_std));
    }
    return out;
  }

  const TrackerModel& model() const { return model_; }

 private:
  double normal(double std) {
    std::normal_distribution<double> d(0.0, std);
    return d(rng_);
  }

  const CompliantPlant& plant_;
  TrackerModel model_;
  std::mt19937_64 rng_;
};

}  // namespace inhand
