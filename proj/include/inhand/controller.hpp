#pragma once

#include "inhand/geometry.hpp"
#include "inhand/goal_manifold.hpp"
#include "inhand/interfaces.hpp"
#include "inhand/plan.hpp"
#include "inhand/planners.hpp"
#include "inhand/plant.hpp"

#include <chrono>
#include <deque>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace inhand {

struct ControlParams {
  double rho = 0.2;                   // rad, modal transition threshold
  double sigma_r = deg_to_rad(2.0);   // rad, initial rotation step
  double sigma_t = 0.003;             // m, translation step
  double tau_r = 0.1;                 // rad, goal orientation threshold
  double tau_t = 0.005;               // m, goal translation threshold
  double lambda = 0.1;                // interpolant update parameter
  Vec3 t_center = Vec3::Zero();       // workspace center
  std::pair<double, double> sigma_r_bounds = {deg_to_rad(0.5),
                                              deg_to_rad(5.0)};
  int max_iterations = 2000;
  int settle_window = 9;  // observations averaged for the exit checks

  void validate() const {
    if (!(tau_r > 0.0) || !(tau_t > 0.0)) {
      throw std::invalid_argument("ControlParams: tau_r and tau_t must be > 0");
    }
    if (lambda < 0.0 || lambda > 1.0) {
      throw std::invalid_argument("ControlParams: lambda out of [0, 1]");
    }
    if (!(sigma_r_bounds.first > 0.0) ||
        sigma_r_bounds.first > sigma_r_bounds.second) {
      throw std::invalid_argument("ControlParams: bad sigma_r bounds");
    }
    if (sigma_r < sigma_r_bounds.first || sigma_r > sigma_r_bounds.second) {
      throw std::invalid_argument("ControlParams: sigma_r outside bounds");
    }
    if (!(rho >= sigma_r)) {
      throw std::invalid_argument("ControlParams: rho must be >= sigma_r");
    }
    if (!(sigma_t > 0.0)) {
      throw std::invalid_argument("ControlParams: sigma_t must be > 0");
    }
    if (max_iterations < 1 || settle_window < 1) {
      throw std::invalid_argument("ControlParams: bad iteration parameters");
    }
    if (!t_center.allFinite()) {
      throw std::invalid_argument("ControlParams: non-finite t_center");
    }
  }
};

enum class Phase { OrientationControl, Recovery, TranslationControl, Done };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::OrientationControl: return "orientation";
    case Phase::Recovery: return "recovery";
    case Phase::TranslationControl: return "translation";
    case Phase::Done: return "done";
  }
  return "?";
}

struct TrajectoryEntry {
  double time = 0.0;
  Pose observed;
  std::optional<ModeAction> commanded;
  Phase phase = Phase::OrientationControl;
  double sigma_r = 0.0;  // adapted step size used on this tick
  int replan_count = 0;
};

struct TrajectoryRecord {
  std::vector<TrajectoryEntry> entries;
};

enum class ControlStatus {
  Ok,
  IterationBudgetExceeded,
  PlanningFailed,
  ObjectDropped,
};

inline const char* control_status_name(ControlStatus s) {
  switch (s) {
    case ControlStatus::Ok: return "ok";
    case ControlStatus::IterationBudgetExceeded: return "budget_exceeded";
    case ControlStatus::PlanningFailed: return "planning_failed";
    case ControlStatus::ObjectDropped: return "dropped";
  }
  return "?";
}

struct ControlResult {
  Pose final_pose;
  TrajectoryRecord log;
  ControlStatus status = ControlStatus::Ok;
  int index_builds = 0;
  int replans = 0;
  double plan_wall_time_s = 0.0;
};

/// Connection threshold the controller hands to the planner. Plans accepted
/// at the full rho may terminate rho-close to the goal manifold yet outside
/// tau_r, leaving the loop a standstill plan; planning to land within half
/// the exit threshold keeps every accepted plan's completion inside it. The
/// controller escalates back toward rho if a goal sits where the metric
/// makes this unreachable.
inline double planning_threshold(const ControlParams& params) {
  return std::min(params.rho, 0.5 * params.tau_r);
}

/// sigma <- clamp(sigma + lambda * (sigma - delta), bounds). The realized
/// per-action rotation delta below sigma grows the step, above shrinks it;
/// the raw update is unbounded, so it is clamped.
inline double adapt_step(double sigma_r, double delta, double lambda,
                         std::pair<double, double> bounds) {
  if (!std::isfinite(sigma_r) || !std::isfinite(delta) ||
      !std::isfinite(lambda)) {
    throw std::invalid_argument("adapt_step: non-finite input");
  }
  if (delta < 0.0) {
    throw std::invalid_argument("adapt_step: delta must be >= 0");
  }
  const double raw = sigma_r + lambda * (sigma_r - delta);
  return std::clamp(raw, bounds.first, bounds.second);
}

/// The single action the controller would execute for a freshly enumerated
/// plan: the leading block's mode, stepped at the adapted sigma but never
/// past the block's total. Nullopt for an empty plan.
inline std::optional<ModeAction> orientation_action(const Plan& plan,
                                                    double sigma_adapted,
                                                    double now) {
  if (plan.empty()) return std::nullopt;
  const ModeAction& first = plan.actions.front();
  const double sign = first.magnitude >= 0.0 ? 1.0 : -1.0;
  double block = 0.0;
  for (const auto& a : plan.actions) {
    if (a.mode != first.mode) break;
    if ((a.magnitude >= 0.0 ? 1.0 : -1.0) != sign) break;
    block += a.magnitude;
  }
  const double magnitude = sign * std::min(sigma_adapted, std::abs(block));
  return ModeAction{first.mode, magnitude, now};
}

/// One greedy recovery step toward the workspace center: plans, executes the
/// step (if the deviation is controllable) and perceives. Callers loop on
/// dist_T(T, t_center) > tau_t.
inline Pose recovery_step(const Vec3& position, const ControlParams& params,
                          PlantHandle& plant, TrackerHandle& tracker) {
  const Plan plan = translation_plan(position, params.t_center, params.sigma_t);
  if (!plan.empty()) {
    ModeAction action = plan.actions.front();
    action.timestamp = plant.clock();
    plant.mode_action(action);
  }
  return tracker.perceive();
}

namespace detail {

class RollingMean {
 public:
  explicit RollingMean(int window) : window_(window) {}

  void push(double v) {
    values_.push_back(v);
    if (static_cast<int>(values_.size()) > window_) values_.pop_front();
  }

  double mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return values_.empty() ? 0.0 : s / static_cast<double>(values_.size());
  }

 private:
  int window_;
  std::deque<double> values_;
};

}  // namespace detail

/// Closed-loop pose control: per-tick replanning from the currently
/// perceived orientation, one modal action per tick with adaptive step
/// sizing, translational recovery toward the workspace center whenever the
/// object strays beyond tau_t, then greedy translation servoing to the goal
/// position.
///
/// The goal manifold index is built once per call and reused by every
/// replan. Plans connect within min(rho, tau_r): connections up to the full
/// rho can terminate short of tau_r, which would stall the loop at a
/// standstill plan. Exit checks average the last `settle_window`
/// observations so a single optimistic noise sample does not end the run.
///
/// Single-threaded by contract: one owner drives the plant and tracker.
inline ControlResult object_control(const Pose& goal,
                                    const ControlParams& params,
                                    PlantHandle& plant,
                                    TrackerHandle& tracker) {
  params.validate();
  ControlResult result;

  const GoalManifoldIndex index(goal.orientation, params.sigma_r);
  result.index_builds = 1;

  double rho_plan = std::min(params.rho, params.tau_r);
  double sigma_adapted = params.sigma_r;
  int ticks = 0;

  const auto log_entry = [&](const Pose& observed,
                             std::optional<ModeAction> commanded,
                             Phase phase) {
    result.log.entries.push_back({plant.clock(), observed, std::move(commanded),
                                  phase, sigma_adapted, result.replans});
  };

  const auto timed_so3_plan = [&](const Rot3& from) {
    const auto t0 = std::chrono::steady_clock::now();
    SO3PlanResult r = so3_plan(from, index, rho_plan, params.sigma_r);
    const auto t1 = std::chrono::steady_clock::now();
    result.plan_wall_time_s +=
        std::chrono::duration<double>(t1 - t0).count();
    ++result.replans;
    return r;
  };

  Pose observed = tracker.perceive();
  log_entry(observed, std::nullopt, Phase::OrientationControl);

  detail::RollingMean rot_err(params.settle_window);
  rot_err.push(dist_R(goal.orientation, observed.orientation));

  try {
    // Orientation control.
    while (rot_err.mean() > params.tau_r) {
      if (ticks >= params.max_iterations) {
        result.status = ControlStatus::IterationBudgetExceeded;
        result.final_pose = observed;
        return result;
      }
      SO3PlanResult planned = timed_so3_plan(observed.orientation);
      if (!plan_ok(planned) &&
          failure_of(planned).reason == PlanFailureReason::ScheduleExhausted &&
          rho_plan < params.rho) {
        // Goal too close to the metric's pitch singularity for the tight
        // threshold; fall back to the caller's full transition threshold.
        rho_plan = params.rho;
        planned = timed_so3_plan(observed.orientation);
      }
      if (!plan_ok(planned)) {
        result.status = ControlStatus::PlanningFailed;
        result.final_pose = observed;
        return result;
      }
      const std::optional<ModeAction> action =
          orientation_action(plan_of(planned), sigma_adapted, plant.clock());
      ++ticks;
      if (!action) {
        observed = tracker.perceive();
        log_entry(observed, std::nullopt, Phase::OrientationControl);
        rot_err.push(dist_R(goal.orientation, observed.orientation));
        continue;
      }
      plant.mode_action(*action);
      const Pose next = tracker.perceive();
      const double delta =
          dist_R(next.orientation, observed.orientation);
      log_entry(next, *action, Phase::OrientationControl);
      sigma_adapted = adapt_step(sigma_adapted, delta, params.lambda,
                                 params.sigma_r_bounds);
      observed = next;
      rot_err.push(dist_R(goal.orientation, observed.orientation));

      // Object recovery.
      while (dist_T(observed.position, params.t_center) > params.tau_t) {
        if (ticks >= params.max_iterations) {
          result.status = ControlStatus::IterationBudgetExceeded;
          result.final_pose = observed;
          return result;
        }
        const Plan tplan = translation_plan(observed.position, params.t_center,
                                            params.sigma_t);
        if (tplan.empty()) break;  // residual lies on the uncontrollable axis
        ModeAction taction = tplan.actions.front();
        taction.timestamp = plant.clock();
        plant.mode_action(taction);
        observed = tracker.perceive();
        log_entry(observed, taction, Phase::Recovery);
        rot_err.push(dist_R(goal.orientation, observed.orientation));
        ++ticks;
      }
    }

    // Translation control.
    detail::RollingMean trans_err(params.settle_window);
    trans_err.push(dist_T(goal.position, observed.position));
    while (trans_err.mean() > params.tau_t) {
      if (ticks >= params.max_iterations) {
        result.status = ControlStatus::IterationBudgetExceeded;
        result.final_pose = observed;
        return result;
      }
      const Plan tplan =
          translation_plan(observed.position, goal.position, params.sigma_t);
      if (tplan.empty()) break;
      ModeAction taction = tplan.actions.front();
      taction.timestamp = plant.clock();
      plant.mode_action(taction);
      observed = tracker.perceive();
      log_entry(observed, taction, Phase::TranslationControl);
      trans_err.push(dist_T(goal.position, observed.position));
      ++ticks;
    }
  } catch (const DropFailure&) {
    result.status = ControlStatus::ObjectDropped;
    result.final_pose = observed;
    return result;
  }

  result.final_pose = observed;
  result.status = ControlStatus::Ok;
  return result;
}

}  // namespace inhand
