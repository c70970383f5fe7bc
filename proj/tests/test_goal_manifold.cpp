#include <catch2/catch_amalgamated.hpp>

#include "inhand/goal_manifold.hpp"
#include "test_helpers.hpp"

#include <limits>
#include <random>

using namespace inhand;
using Catch::Matchers::WithinAbs;

namespace {

// Raw scan over the entry list, written independently of query_linear.
ManifoldQuery scan_oracle(const GoalManifoldIndex& index, const Rot3& query) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < index.entries().size(); ++i) {
    const double d = dist_R(index.entries()[i].rotation, query);
    if (d < best) {
      best = d;
      best_idx = i;
    }
  }
  return {index.entries()[best_idx].phi, best, best_idx};
}

}  // namespace

TEST_CASE("manifold entry counts follow the schedule") {
  const GoalManifoldIndex coarse(Rot3::identity(), kPi / 2);
  REQUIRE(coarse.entries().size() == 4);
  CHECK(coarse.entries()[0].phi == 0.0);

  std::mt19937_64 rng(31);
  const Rot3 goal = testutil::random_rotation(rng);
  const GoalManifoldIndex fine(goal, deg_to_rad(2.0));
  CHECK(fine.entries().size() == candidate_steps(deg_to_rad(2.0)).size());
  CHECK_THAT(dist_R(fine.entries()[0].rotation, goal), WithinAbs(0.0, 1e-12));
}

TEST_CASE("every entry is Rz(phi) times the goal") {
  std::mt19937_64 rng(37);
  const Rot3 goal = testutil::random_rotation(rng);
  const GoalManifoldIndex index(goal, deg_to_rad(5.0));
  for (const auto& entry : index.entries()) {
    CHECK_THAT(dist_R(entry.rotation, rot_about_axis(Axis::Z, entry.phi) * goal),
               WithinAbs(0.0, 1e-9));
    // phi round-trips through the z-offset of rotation * goal^-1.
    const EulerZXZ e = euler_zxz_decompose(entry.rotation * goal.inverse());
    CHECK_THAT(std::abs(wrap_angle(e.phi + e.psi - entry.phi)),
               WithinAbs(0.0, 1e-9));
    CHECK_THAT(e.theta, WithinAbs(0.0, 1e-7));
  }
}

TEST_CASE("query_closest trivial cases") {
  std::mt19937_64 rng(41);
  const Rot3 goal = testutil::random_rotation(rng);
  const double sigma = deg_to_rad(2.0);
  const GoalManifoldIndex index(goal, sigma);

  const auto exact = index.query_closest(goal);
  CHECK(exact.phi == 0.0);
  CHECK_THAT(exact.dist, WithinAbs(0.0, 1e-12));

  const auto quarter =
      index.query_closest(rot_about_axis(Axis::Z, sigma / 4) * goal);
  CHECK(quarter.phi == 0.0);
  CHECK_THAT(quarter.dist, WithinAbs(sigma / 4, 1e-9));
}

TEST_CASE("query_closest matches the exhaustive scan") {
  std::mt19937_64 rng(43);
  for (double sigma : {deg_to_rad(0.5), deg_to_rad(2.0), deg_to_rad(5.0)}) {
    const Rot3 goal = testutil::random_rotation(rng);
    const GoalManifoldIndex index(goal, sigma);
    for (int i = 0; i < 400; ++i) {
      const Rot3 query = testutil::random_rotation(rng);
      const auto tree = index.query_closest(query);
      const auto linear = index.query_linear(query);
      const auto raw = scan_oracle(index, query);
      CHECK(tree.index == linear.index);
      CHECK(tree.dist == linear.dist);
      CHECK(linear.index == raw.index);
      CHECK(linear.dist == raw.dist);
    }
  }
}

TEST_CASE("query_closest agrees with the scan around near-tie midpoints") {
  const double sigma = deg_to_rad(10.0);
  const GoalManifoldIndex index(Rot3::identity(), sigma);
  // Sweep across the midpoint between the phi = 0 and phi = +sigma entries,
  // where the argmin flips; the tree must keep matching the scan exactly.
  for (int i = -50; i <= 50; ++i) {
    const Rot3 q = rot_about_axis(Axis::Z, sigma / 2 + i * 1e-12);
    const auto tree = index.query_closest(q);
    const auto linear = index.query_linear(q);
    CHECK(tree.index == linear.index);
    CHECK(tree.dist == linear.dist);
  }
}

TEST_CASE("query_closest_within honors the strict radius") {
  const GoalManifoldIndex index(Rot3::identity(), deg_to_rad(2.0));
  const Rot3 query = rot_about_axis(Axis::X, 0.3);
  const auto full = index.query_closest(query);
  CHECK(index.query_closest_within(query, full.dist) == std::nullopt);
  const auto inside = index.query_closest_within(query, full.dist + 1e-9);
  REQUIRE(inside.has_value());
  CHECK(inside->index == full.index);
  CHECK(inside->dist == full.dist);
}

TEST_CASE("index build is deterministic") {
  std::mt19937_64 rng(47);
  const Rot3 goal = testutil::random_rotation(rng);
  const GoalManifoldIndex a(goal, deg_to_rad(2.0));
  const GoalManifoldIndex b(goal, deg_to_rad(2.0));
  REQUIRE(a.entries().size() == b.entries().size());
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    CHECK(a.entries()[i].phi == b.entries()[i].phi);
    CHECK(a.entries()[i].rotation.quaternion().coeffs() ==
          b.entries()[i].rotation.quaternion().coeffs());
  }
}

TEST_CASE("build counter increments per construction") {
  const auto before = GoalManifoldIndex::build_count();
  const GoalManifoldIndex a(Rot3::identity(), deg_to_rad(2.0));
  const GoalManifoldIndex b(Rot3::identity(), deg_to_rad(2.0));
  CHECK(GoalManifoldIndex::build_count() == before + 2);
}

TEST_CASE("invalid sigma is rejected") {
  CHECK_THROWS_AS(GoalManifoldIndex(Rot3::identity(), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GoalManifoldIndex(Rot3::identity(), 4.0),
                  std::invalid_argument);
}
