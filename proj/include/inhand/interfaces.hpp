#pragma once

#include "inhand/geometry.hpp"
#include "inhand/plan.hpp"

namespace inhand {

/// Executes one modal action; the physical or simulated step completes
/// before the call returns.
struct PlantHandle {
  virtual ~PlantHandle() = default;
  virtual void mode_action(const ModeAction& action) = 0;
  virtual double clock() const = 0;
};

/// Returns the current perceived object pose; never blocks longer than one
/// tracker period.
struct TrackerHandle {
  virtual ~TrackerHandle() = default;
  virtual Pose perceive() = 0;
};

}  // namespace inhand
