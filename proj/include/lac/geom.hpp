#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Core>

namespace lac {

template <typename Scalar>
using Vec2T = Eigen::Matrix<Scalar, 2, 1>;

using Vec2 = Vec2T<double>;

/// Tolerance used for every angle comparison.
inline constexpr double kAngleTol = 1e-9;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Reduce an angle into [0, 2*pi).
template <typename Scalar>
Scalar wrap_two_pi(Scalar radians) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar r = std::fmod(radians, two_pi);
  if (r < Scalar(0)) r += two_pi;
  // fmod of a tiny negative value can round up to exactly 2*pi
  if (r >= two_pi) r = Scalar(0);
  return r;
}

/// An angle in radians, always stored reduced into [0, 2*pi).
template <typename Scalar>
class AngleT {
 public:
  constexpr AngleT() = default;
  explicit AngleT(Scalar radians) : radians_(wrap_two_pi(radians)) {}

  Scalar radians() const { return radians_; }

  friend AngleT operator+(AngleT a, AngleT b) { return AngleT(a.radians_ + b.radians_); }
  friend AngleT operator-(AngleT a, AngleT b) { return AngleT(a.radians_ - b.radians_); }
  friend bool operator==(AngleT, AngleT) = default;

 private:
  Scalar radians_ = Scalar(0);
};

using Angle = AngleT<double>;

/// Amount of clockwise rotation that aligns v with +x, i.e. the
/// counterclockwise angle from +x to v.
template <typename Derived>
AngleT<typename Derived::Scalar> rho(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.x() == Scalar(0) && v.y() == Scalar(0)) {
    throw DomainError("rho: direction of the zero vector is undefined");
  }
  return AngleT<Scalar>(std::atan2(v.y(), v.x()));
}

/// Shortest unsigned angle between a and b, in [0, pi].
template <typename Scalar>
Scalar angular_distance(AngleT<Scalar> a, AngleT<Scalar> b) {
  const Scalar forward = (a - b).radians();
  const Scalar backward = (b - a).radians();
  return std::min(forward, backward);
}

template <typename Derived>
Vec2T<typename Derived::Scalar> rotate_ccw(const Eigen::MatrixBase<Derived>& v,
                                           typename Derived::Scalar radians) {
  const auto c = std::cos(radians);
  const auto s = std::sin(radians);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

template <typename Derived>
Vec2T<typename Derived::Scalar> rotate_cw(const Eigen::MatrixBase<Derived>& v,
                                          typename Derived::Scalar radians) {
  return rotate_ccw(v, -radians);
}

/// Unit vector at the given counterclockwise angle from +x.
template <typename Scalar>
Vec2T<Scalar> unit_at(AngleT<Scalar> a) {
  return {std::cos(a.radians()), std::sin(a.radians())};
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

}  // namespace lac
