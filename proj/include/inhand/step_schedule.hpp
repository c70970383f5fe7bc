#pragma once

#include "inhand/geometry.hpp"

#include <stdexcept>
#include <vector>

namespace inhand {

/// Ordered candidate step offsets [0, s, -s, 2s, -2s, ...] truncated at
/// magnitude pi. +pi and -pi denote the same rotation, so a single terminal
/// +pi entry is kept; when pi is not an integer multiple of the step it is
/// appended as the final entry.
struct StepSchedule {
  std::vector<double> steps;

  std::size_t size() const { return steps.size(); }
  double operator[](std::size_t i) const { return steps[i]; }
  auto begin() const { return steps.begin(); }
  auto end() const { return steps.end(); }
};

inline StepSchedule candidate_steps(double sigma) {
  if (!(sigma > 0.0) || !(sigma <= kPi) || !std::isfinite(sigma)) {
    throw std::invalid_argument("candidate_steps: sigma must be in (0, pi]");
  }
  StepSchedule s;
  s.steps.push_back(0.0);
  for (int k = 1;; ++k) {
    const double v = k * sigma;
    if (v >= kPi - 1e-12) break;
    s.steps.push_back(v);
    s.steps.push_back(-v);
  }
  s.steps.push_back(kPi);
  return s;
}

}  // namespace inhand
