#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace inhand {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

using Vec3 = Eigen::Vector3d;

enum class Axis { X, Y, Z };

/// Rotation element of SO(3).
///
/// Stored as a unit quaternion in canonical form: the scalar part is
/// non-negative (ties broken lexicographically on the vector part), so the
/// two antipodal quaternion representatives of a rotation collapse to one.
/// Every constructor and composition renormalizes.
class Rot3 {
 public:
  Rot3() : q_(1.0, 0.0, 0.0, 0.0) {}

  static Rot3 identity() { return Rot3{}; }

  /// Builds from scalar-first components. Throws std::invalid_argument on
  /// non-finite input or a near-zero norm.
  static Rot3 from_quaternion(double w, double x, double y, double z) {
    Eigen::Quaterniond q(w, x, y, z);
    if (!q.coeffs().allFinite()) {
      throw std::invalid_argument("Rot3: non-finite quaternion");
    }
    const double n = q.norm();
    if (n < 1e-12) {
      throw std::invalid_argument("Rot3: quaternion norm too small");
    }
    q.coeffs() /= n;
    return Rot3(q);
  }

  static Rot3 from_eigen(const Eigen::Quaterniond& q) {
    return from_quaternion(q.w(), q.x(), q.y(), q.z());
  }

  const Eigen::Quaterniond& quaternion() const { return q_; }
  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }

  Rot3 inverse() const { return Rot3(q_.conjugate()); }

  Vec3 operator*(const Vec3& v) const { return q_ * v; }

  friend Rot3 operator*(const Rot3& a, const Rot3& b) {
    Eigen::Quaterniond q = a.q_ * b.q_;
    q.normalize();
    return Rot3(q);
  }

  /// Extrinsic x-y-z angles (roll about x, pitch about y, yaw about z), i.e.
  /// the (r, p, y) with R = Rz(y) * Ry(p) * Rx(r).
  Vec3 rpy() const {
    const Eigen::Matrix3d m = matrix();
    const double sp = std::clamp(-m(2, 0), -1.0, 1.0);
    const double pitch = std::asin(sp);
    const double cp = std::sqrt(m(2, 1) * m(2, 1) + m(2, 2) * m(2, 2));
    double roll, yaw;
    if (cp > 1e-12) {
      roll = std::atan2(m(2, 1), m(2, 2));
      yaw = std::atan2(m(1, 0), m(0, 0));
    } else {
      // Gimbal configuration: fold the free angle into yaw.
      roll = 0.0;
      yaw = std::atan2(-m(0, 1), m(1, 1));
    }
    return {roll, pitch, yaw};
  }

 private:
  explicit Rot3(const Eigen::Quaterniond& q) : q_(q) { canonicalize(); }

  void canonicalize() {
    const double w = q_.w(), x = q_.x(), y = q_.y(), z = q_.z();
    const bool flip =
        w < 0.0 ||
        (w == 0.0 &&
         (x < 0.0 || (x == 0.0 && (y < 0.0 || (y == 0.0 && z < 0.0)))));
    if (flip) q_.coeffs() = -q_.coeffs();
  }

  Eigen::Quaterniond q_;
};

/// Extrinsic rotation about a hand-frame axis.
inline Rot3 rot_about_axis(Axis axis, double angle) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("rot_about_axis: non-finite angle");
  }
  Vec3 u = Vec3::Zero();
  switch (axis) {
    case Axis::X: u.x() = 1.0; break;
    case Axis::Y: u.y() = 1.0; break;
    case Axis::Z: u.z() = 1.0; break;
  }
  return Rot3::from_eigen(Eigen::Quaterniond(Eigen::AngleAxisd(angle, u)));
}

inline Rot3 compose(const Rot3& a, const Rot3& b) { return a * b; }

/// L2 norm of the component-wise wrapped roll/pitch/yaw difference between
/// two precomputed rpy triples. Shared by dist_R and the manifold index so
/// both produce bit-identical values.
inline double rpy_dist(const Vec3& a, const Vec3& b) {
  const double dr = wrap_angle(a.x() - b.x());
  const double dp = wrap_angle(a.y() - b.y());
  const double dy = wrap_angle(a.z() - b.z());
  return std::sqrt(dr * dr + dp * dp + dy * dy);
}

/// Rotation distance: wrapped roll/pitch/yaw difference, L2.
inline double dist_R(const Rot3& a, const Rot3& b) {
  return rpy_dist(a.rpy(), b.rpy());
}

/// Euclidean translation distance.
inline double dist_T(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Object configuration: translation plus rotation.
struct Pose {
  Vec3 position = Vec3::Zero();
  Rot3 orientation;
};

/// Z-X-Z decomposition angles with phi, psi in [0, 2*pi) and theta in [0, pi].
struct EulerZXZ {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

inline Rot3 euler_zxz_reconstruct(const EulerZXZ& e) {
  return rot_about_axis(Axis::Z, e.phi) * rot_about_axis(Axis::X, e.theta) *
         rot_about_axis(Axis::Z, e.psi);
}

/// Decomposes R into Rz(phi) * Rx(theta) * Rz(psi). Total on SO(3); at the
/// theta in {0, pi} singularities returns psi = 0 with the free angle folded
/// into phi.
inline EulerZXZ euler_zxz_decompose(const Rot3& r) {
  const Eigen::Matrix3d m = r.matrix();
  EulerZXZ e;
  const double c = std::clamp(m(2, 2), -1.0, 1.0);
  e.theta = std::acos(c);
  const double st = std::sqrt(m(2, 0) * m(2, 0) + m(2, 1) * m(2, 1));
  double phi, psi;
  if (st > 1e-12) {
    phi = std::atan2(m(0, 2), -m(1, 2));
    psi = std::atan2(m(2, 0), m(2, 1));
  } else {
    psi = 0.0;
    phi = std::atan2(m(1, 0), m(0, 0));
  }
  if (phi < 0.0) phi += 2.0 * kPi;
  if (psi < 0.0) psi += 2.0 * kPi;
  if (phi >= 2.0 * kPi) phi = 0.0;
  if (psi >= 2.0 * kPi) psi = 0.0;
  e.phi = phi;
  e.psi = psi;
  return e;
}

}  // namespace inhand
