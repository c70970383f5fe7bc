#pragma once

#include "inhand/geometry.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace inhand {

/// Seconds of simulated time per modal action.
inline constexpr double kActionPeriod = 0.5;

/// The four controllable motion primitives of the hand. There is no x-axis
/// translation mode.
enum class Mode { RotX, RotZ, TransY, TransZ };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::RotX: return "rot_x";
    case Mode::RotZ: return "rot_z";
    case Mode::TransY: return "trans_y";
    case Mode::TransZ: return "trans_z";
  }
  return "?";
}

inline bool is_rotation_mode(Mode m) {
  return m == Mode::RotX || m == Mode::RotZ;
}

/// One commanded step: signed radians for rotation modes, signed meters for
/// translation modes.
struct ModeAction {
  Mode mode;
  double magnitude;
  double timestamp = 0.0;
};

struct ZxzDecomposition {
  double psi;
  double theta;
  double phi;
};

/// Timestamped sequence of modal actions. Rotation plans are grouped as a
/// RotZ block (sums to psi), a RotX block (sums to theta) and a final RotZ
/// block (sums to -phi, the goal-side rotation replayed forward).
struct Plan {
  std::vector<ModeAction> actions;
  std::optional<ZxzDecomposition> decomposition;
  double step = 0.0;

  bool empty() const { return actions.empty(); }
};

enum class PlanFailureReason { ScheduleExhausted, InvalidInput };

struct PlanningFailure {
  PlanFailureReason reason;
  std::string detail;
};

using SO3PlanResult = std::variant<Plan, PlanningFailure>;

inline bool plan_ok(const SO3PlanResult& r) {
  return std::holds_alternative<Plan>(r);
}
inline const Plan& plan_of(const SO3PlanResult& r) { return std::get<Plan>(r); }
inline const PlanningFailure& failure_of(const SO3PlanResult& r) {
  return std::get<PlanningFailure>(r);
}

}  // namespace inhand
