#include <catch2/catch_amalgamated.hpp>

#include "inhand/step_schedule.hpp"

#include <cmath>

using namespace inhand;
using Catch::Matchers::WithinAbs;

namespace {

// Count oracle, independent of the construction loop: one zero entry, a
// +/- pair for every multiple of sigma strictly inside (0, pi), one pi entry.
std::size_t expected_count(double sigma) {
  std::size_t interior = 0;
  for (int k = 1; k * sigma < kPi - 1e-12; ++k) ++interior;
  return 1 + 2 * interior + 1;
}

}  // namespace

TEST_CASE("candidate_steps with exact division") {
  const StepSchedule s = candidate_steps(kPi / 2);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == 0.0);
  CHECK_THAT(s[1], WithinAbs(kPi / 2, 1e-15));
  CHECK_THAT(s[2], WithinAbs(-kPi / 2, 1e-15));
  CHECK_THAT(s[3], WithinAbs(kPi, 1e-15));
}

TEST_CASE("candidate_steps at two degrees") {
  const StepSchedule s = candidate_steps(deg_to_rad(2.0));
  CHECK(s.size() == expected_count(deg_to_rad(2.0)));
  CHECK(s.size() == 180);
  CHECK_THAT(s[1], WithinAbs(deg_to_rad(2.0), 1e-15));
  CHECK_THAT(s[2], WithinAbs(-deg_to_rad(2.0), 1e-15));
  CHECK_THAT(s[s.size() - 2], WithinAbs(-deg_to_rad(178.0), 1e-12));
  CHECK(s[s.size() - 1] == kPi);
}

TEST_CASE("candidate_steps degenerate coarsest schedule") {
  const StepSchedule s = candidate_steps(kPi);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == kPi);
}

TEST_CASE("candidate_steps appends a terminal pi when sigma does not divide") {
  const double sigma = deg_to_rad(50.0);
  const StepSchedule s = candidate_steps(sigma);
  CHECK(s.size() == expected_count(sigma));
  CHECK(s[s.size() - 1] == kPi);
  // 150 deg is the last full multiple; pi closes the schedule.
  CHECK_THAT(s[s.size() - 2], WithinAbs(-deg_to_rad(150.0), 1e-12));
}

TEST_CASE("candidate_steps magnitudes are non-decreasing") {
  for (double sigma : {deg_to_rad(0.5), deg_to_rad(2.0), deg_to_rad(37.0)}) {
    const StepSchedule s = candidate_steps(sigma);
    for (std::size_t i = 1; i < s.size(); ++i) {
      CHECK(std::abs(s[i]) >= std::abs(s[i - 1]) - 1e-15);
    }
  }
}

TEST_CASE("candidate_steps covers the circle within sigma/2") {
  for (double sigma : {deg_to_rad(2.0), deg_to_rad(5.0), deg_to_rad(50.0)}) {
    const StepSchedule s = candidate_steps(sigma);
    for (double angle = -kPi; angle <= kPi; angle += deg_to_rad(0.25)) {
      double best = 2.0 * kPi;
      for (double v : s) {
        best = std::min(best, std::abs(wrap_angle(angle - v)));
      }
      CHECK(best <= sigma / 2 + 1e-9);
    }
  }
}

TEST_CASE("candidate_steps rejects out-of-range sigma") {
  CHECK_THROWS_AS(candidate_steps(0.0), std::invalid_argument);
  CHECK_THROWS_AS(candidate_steps(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(candidate_steps(kPi + 0.01), std::invalid_argument);
}
