#include <catch2/catch_amalgamated.hpp>

#include "inhand/geometry.hpp"
#include "test_helpers.hpp"

#include <random>

using namespace inhand;
using Catch::Matchers::WithinAbs;

TEST_CASE("rot_about_axis basics") {
  CHECK(dist_R(rot_about_axis(Axis::Z, 0.0), Rot3::identity()) == 0.0);

  const Rot3 twice = rot_about_axis(Axis::X, kPi) * rot_about_axis(Axis::X, kPi);
  CHECK_THAT(dist_R(twice, Rot3::identity()), WithinAbs(0.0, 1e-12));

  const Rot3 sum = rot_about_axis(Axis::Z, 0.3) * rot_about_axis(Axis::Z, 0.4);
  CHECK_THAT(dist_R(sum, rot_about_axis(Axis::Z, 0.7)), WithinAbs(0.0, 1e-12));

  CHECK_THROWS_AS(rot_about_axis(Axis::X, std::nan("")), std::invalid_argument);
}

TEST_CASE("compose identity and inverse") {
  std::mt19937_64 rng(7);
  const Rot3 r = testutil::random_rotation(rng);
  CHECK_THAT(dist_R(compose(Rot3::identity(), r), r), WithinAbs(0.0, 1e-12));
  CHECK_THAT(dist_R(compose(r, r.inverse()), Rot3::identity()),
             WithinAbs(0.0, 1e-12));
}

TEST_CASE("compose is associative on random rotations") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rot3 a = testutil::random_rotation(rng);
    const Rot3 b = testutil::random_rotation(rng);
    const Rot3 c = testutil::random_rotation(rng);
    CHECK_THAT(dist_R(compose(compose(a, b), c), compose(a, compose(b, c))),
               WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("composition keeps the quaternion canonical and normalized") {
  std::mt19937_64 rng(13);
  Rot3 acc;
  for (int i = 0; i < 5000; ++i) {
    acc = testutil::random_rotation(rng) * acc;
    CHECK(acc.w() >= 0.0);
    CHECK_THAT(acc.quaternion().norm(), WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("dist_R examples") {
  std::mt19937_64 rng(17);
  const Rot3 r = testutil::random_rotation(rng);
  CHECK(dist_R(r, r) == 0.0);
  CHECK_THAT(dist_R(Rot3::identity(), rot_about_axis(Axis::Z, 0.2)),
             WithinAbs(0.2, 1e-12));

  // Near-antipodal yaws: the wrapped difference stays small.
  CHECK_THAT(dist_R(rot_about_axis(Axis::Z, 3.1), rot_about_axis(Axis::Z, -3.1)),
             WithinAbs(2.0 * kPi - 6.2, 1e-12));
}

TEST_CASE("dist_R matches an independent quaternion rpy extraction") {
  // Spot value from the cross-axis example.
  const Rot3 a = rot_about_axis(Axis::X, 0.1);
  const Rot3 b = rot_about_axis(Axis::Z, 0.1);
  const Vec3 oa = testutil::quat_rpy_oracle(a);
  const Vec3 ob = testutil::quat_rpy_oracle(b);
  const double expected = rpy_dist(oa, ob);
  CHECK_THAT(dist_R(a, b), WithinAbs(expected, 1e-12));
  CHECK_THAT(dist_R(a, b), WithinAbs(std::sqrt(2.0) * 0.1, 1e-9));

  std::mt19937_64 rng(19);
  for (int i = 0; i < 2000; ++i) {
    const Rot3 x = testutil::random_rotation(rng);
    const Rot3 y = testutil::random_rotation(rng);
    const double oracle = rpy_dist(testutil::quat_rpy_oracle(x),
                                   testutil::quat_rpy_oracle(y));
    CHECK_THAT(dist_R(x, y), WithinAbs(oracle, 1e-9));
  }
}

TEST_CASE("dist_R symmetry and identity over random samples") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10000; ++i) {
    const Rot3 a = testutil::random_rotation(rng);
    const Rot3 b = testutil::random_rotation(rng);
    CHECK(dist_R(a, a) == 0.0);
    CHECK(dist_R(a, b) == dist_R(b, a));
  }
}

TEST_CASE("dist_T examples") {
  CHECK(dist_T(Vec3(0, 0, 0), Vec3(0, 0, 0)) == 0.0);
  CHECK_THAT(dist_T(Vec3(0, 0, 0), Vec3(0, -0.018, 0)), WithinAbs(0.018, 1e-15));
  CHECK_THAT(dist_T(Vec3(1, 2, 2), Vec3(0, 0, 0)), WithinAbs(3.0, 1e-15));
}

TEST_CASE("euler zxz decomposition examples") {
  const EulerZXZ id = euler_zxz_decompose(Rot3::identity());
  CHECK(id.phi == 0.0);
  CHECK(id.theta == 0.0);
  CHECK(id.psi == 0.0);

  const EulerZXZ mid = euler_zxz_decompose(rot_about_axis(Axis::X, kPi / 2));
  CHECK_THAT(mid.phi, WithinAbs(0.0, 1e-12));
  CHECK_THAT(mid.theta, WithinAbs(kPi / 2, 1e-12));
  CHECK_THAT(mid.psi, WithinAbs(0.0, 1e-12));
}

TEST_CASE("euler zxz gimbal configurations return psi = 0") {
  for (double yaw : {0.4, -1.3, 3.0}) {
    const Rot3 r0 = rot_about_axis(Axis::Z, yaw);
    const EulerZXZ e0 = euler_zxz_decompose(r0);
    CHECK(e0.psi == 0.0);
    CHECK_THAT(dist_R(euler_zxz_reconstruct(e0), r0), WithinAbs(0.0, 1e-9));

    const Rot3 r1 = rot_about_axis(Axis::Z, yaw) * rot_about_axis(Axis::X, kPi);
    const EulerZXZ e1 = euler_zxz_decompose(r1);
    CHECK(e1.psi == 0.0);
    CHECK_THAT(dist_R(euler_zxz_reconstruct(e1), r1), WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("euler zxz round-trips random rotations") {
  std::mt19937_64 rng(29);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Rot3 r = testutil::random_rotation(rng);
    const EulerZXZ e = euler_zxz_decompose(r);
    CHECK(e.phi >= 0.0);
    CHECK(e.phi < 2.0 * kPi);
    CHECK(e.theta >= 0.0);
    CHECK(e.theta <= kPi);
    CHECK(e.psi >= 0.0);
    CHECK(e.psi < 2.0 * kPi);
    worst = std::max(worst, dist_R(euler_zxz_reconstruct(e), r));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("rpy uses the extrinsic x-y-z convention") {
  // R = Rz(yaw) Ry(pitch) Rx(roll) must extract back to (roll, pitch, yaw).
  const double roll = 0.31, pitch = -0.52, yaw = 1.17;
  const Rot3 r = rot_about_axis(Axis::Z, yaw) * rot_about_axis(Axis::Y, pitch) *
                 rot_about_axis(Axis::X, roll);
  const Vec3 e = r.rpy();
  CHECK_THAT(e.x(), WithinAbs(roll, 1e-12));
  CHECK_THAT(e.y(), WithinAbs(pitch, 1e-12));
  CHECK_THAT(e.z(), WithinAbs(yaw, 1e-12));
}

TEST_CASE("quaternion constructor rejects bad input") {
  CHECK_THROWS_AS(Rot3::from_quaternion(0, 0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Rot3::from_quaternion(std::nan(""), 0, 0, 1),
                  std::invalid_argument);
}
