#pragma once

#include "inhand/geometry.hpp"
#include "inhand/goal_manifold.hpp"
#include "inhand/plan.hpp"
#include "inhand/step_schedule.hpp"

#include <cmath>
#include <vector>

namespace inhand {

namespace detail {

// Signed steps of at most sigma summing exactly to `total`; the remainder is
// emitted as a final partial step, never an overshoot.
inline void emit_block(std::vector<ModeAction>& out, Mode mode, double total,
                       double sigma, double period) {
  double rem = total;
  while (std::abs(rem) > sigma + 1e-12) {
    const double step = rem > 0.0 ? sigma : -sigma;
    out.push_back({mode, step, static_cast<double>(out.size()) * period});
    rem -= step;
  }
  if (std::abs(rem) > 1e-12) {
    out.push_back({mode, rem, static_cast<double>(out.size()) * period});
  }
}

}  // namespace detail

/// Expands a (psi, theta, phi) connection into an executable plan: RotZ steps
/// summing to psi, RotX steps summing to theta, then RotZ steps summing to
/// -phi so that a noiseless replay lands on the matched manifold entry's
/// preimage of the goal.
inline Plan enumerate_path(const Rot3& /*start*/, double sigma_r, double psi,
                           double theta, double phi) {
  Plan plan;
  plan.step = sigma_r;
  detail::emit_block(plan.actions, Mode::RotZ, psi, sigma_r, kActionPeriod);
  detail::emit_block(plan.actions, Mode::RotX, theta, sigma_r, kActionPeriod);
  detail::emit_block(plan.actions, Mode::RotZ, -phi, sigma_r, kActionPeriod);
  plan.decomposition = ZxzDecomposition{psi, theta, phi};
  return plan;
}

/// Bidirectional Z-X-Z search against a prebuilt goal-manifold index.
///
/// Iterates psi (outer) and theta (inner) over the candidate schedule, forms
/// R* = Rx(theta) * Rz(psi) * start and queries the index; the first (psi,
/// theta) whose closest entry lies strictly within rho wins, and the plan is
/// enumerated outward from the connection.
inline SO3PlanResult so3_plan(const Rot3& start,
                              const GoalManifoldIndex& goal_index, double rho,
                              double sigma_r) {
  if (!std::isfinite(rho) || !(rho > 0.0)) {
    return PlanningFailure{PlanFailureReason::InvalidInput,
                           "rho must be positive and finite"};
  }
  if (!std::isfinite(sigma_r) || !(sigma_r > 0.0) || sigma_r > kPi) {
    return PlanningFailure{PlanFailureReason::InvalidInput,
                           "sigma_r must be in (0, pi]"};
  }
  const StepSchedule schedule = candidate_steps(sigma_r);
  std::vector<Rot3> rx;
  rx.reserve(schedule.size());
  for (double theta : schedule) rx.push_back(rot_about_axis(Axis::X, theta));

  for (double psi : schedule) {
    const Rot3 base = rot_about_axis(Axis::Z, psi) * start;
    for (std::size_t ti = 0; ti < schedule.size(); ++ti) {
      const Rot3 r_star = rx[ti] * base;
      const auto hit = goal_index.query_closest_within(r_star, rho);
      if (hit) {
        return enumerate_path(start, sigma_r, psi, schedule[ti], hit->phi);
      }
    }
  }
  return PlanningFailure{PlanFailureReason::ScheduleExhausted,
                         "no (psi, theta) pair connects within rho"};
}

inline SO3PlanResult so3_plan(const Rot3& start,
                              const GoalManifoldIndex& goal_index,
                              double rho) {
  return so3_plan(start, goal_index, rho, goal_index.sigma_r());
}

/// Convenience overload that builds the goal manifold itself. Closed-loop
/// callers should build the index once and reuse it across replans.
inline SO3PlanResult so3_plan(const Rot3& start, const Rot3& goal, double rho,
                              double sigma_r) {
  if (!std::isfinite(sigma_r) || !(sigma_r > 0.0) || sigma_r > kPi) {
    return PlanningFailure{PlanFailureReason::InvalidInput,
                           "sigma_r must be in (0, pi]"};
  }
  const GoalManifoldIndex index(goal, sigma_r);
  return so3_plan(start, index, rho, sigma_r);
}

/// Greedy single-step translation servoing.
///
/// Picks the axis of maximum |goal - start| with the x-then-y-then-z tie
/// cascade and emits one step of magnitude sigma_t toward the goal. The hand
/// has no x-translation mode, so an x-axis maximum is remapped to the larger
/// controllable deviation; when both controllable deviations are below
/// sigma_t / 2 the plan is empty. The caller's loop provides iteration.
inline Plan translation_plan(const Vec3& start, const Vec3& goal,
                             double sigma_t) {
  if (!std::isfinite(sigma_t) || !(sigma_t > 0.0)) {
    throw std::invalid_argument("translation_plan: sigma_t must be positive");
  }
  const Vec3 gamma = goal - start;
  const double ax = std::abs(gamma.x());
  const double ay = std::abs(gamma.y());
  const double az = std::abs(gamma.z());

  Plan plan;
  plan.step = sigma_t;

  Mode mode;
  double component;
  if (ax >= ay && ax >= az) {
    // Maximum deviation is along the uncontrollable axis.
    if (ay < sigma_t / 2.0 && az < sigma_t / 2.0) return plan;
    if (ay >= az) {
      mode = Mode::TransY;
      component = gamma.y();
    } else {
      mode = Mode::TransZ;
      component = gamma.z();
    }
  } else if (ay >= az) {
    mode = Mode::TransY;
    component = gamma.y();
  } else {
    mode = Mode::TransZ;
    component = gamma.z();
  }
  const double step = component >= 0.0 ? sigma_t : -sigma_t;
  plan.actions.push_back({mode, step, 0.0});
  return plan;
}

}  // namespace inhand
