#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace steergap {

/// A 2x2 Hermitian operator in Pauli coordinates, X = (1/2) sum_i x_i sigma_i
/// with sigma_0 = I. Under this convention a rank-1 projector onto Bloch
/// direction n has coordinates (1, n) and Tr(XY) = (1/2) x.y.
class HermOp {
 public:
  HermOp() : c_(Eigen::Vector4d::Zero()) {}
  explicit HermOp(const Eigen::Vector4d& coords) : c_(coords) {}
  HermOp(double x0, double x1, double x2, double x3) : c_(x0, x1, x2, x3) {}

  static HermOp identity() { return HermOp(2.0, 0.0, 0.0, 0.0); }
  static HermOp zero() { return HermOp(); }

  const Eigen::Vector4d& coords() const { return c_; }
  double operator[](int i) const { return c_[i]; }

  double trace() const { return c_[0]; }
  Eigen::Vector3d bloch() const { return c_.tail<3>(); }

  double eig_max() const { return 0.5 * (c_[0] + c_.tail<3>().norm()); }
  double eig_min() const { return 0.5 * (c_[0] - c_.tail<3>().norm()); }

  /// x0 >= -tol and x0^2 >= |x|^2 - tol.
  bool is_psd(double tol = 0.0) const;

  /// Coordinates of the operator product X*X.
  HermOp squared() const;

  HermOp& operator+=(const HermOp& o) {
    c_ += o.c_;
    return *this;
  }
  HermOp& operator-=(const HermOp& o) {
    c_ -= o.c_;
    return *this;
  }
  HermOp& operator*=(double s) {
    c_ *= s;
    return *this;
  }

  friend HermOp operator+(HermOp a, const HermOp& b) { return a += b; }
  friend HermOp operator-(HermOp a, const HermOp& b) { return a -= b; }
  friend HermOp operator-(HermOp a) { return a *= -1.0; }
  friend HermOp operator*(double s, HermOp a) { return a *= s; }
  friend HermOp operator*(HermOp a, double s) { return a *= s; }

 private:
  Eigen::Vector4d c_;
};

/// Hilbert-Schmidt inner product Tr(A B) = (1/2) a.b.
inline double hs_inner(const HermOp& a, const HermOp& b) {
  return 0.5 * a.coords().dot(b.coords());
}

/// A unit vector on the Bloch sphere.
class BlochPoint {
 public:
  static constexpr double kUnitTol = 1e-12;

  /// Throws ValidationError unless |n| = 1 within kUnitTol.
  explicit BlochPoint(const Eigen::Vector3d& n);
  BlochPoint(double x, double y, double z) : BlochPoint(Eigen::Vector3d(x, y, z)) {}

  /// Rescales a nonzero vector onto the sphere.
  static BlochPoint normalized(const Eigen::Vector3d& v);

  const Eigen::Vector3d& vec() const { return n_; }
  double operator[](int i) const { return n_[i]; }
  BlochPoint antipode() const { return BlochPoint(-n_, Unchecked{}); }

 private:
  struct Unchecked {};
  BlochPoint(const Eigen::Vector3d& n, Unchecked) : n_(n) {}
  Eigen::Vector3d n_;
};

/// Rank-1 projector (1/2)(I + n.sigma), coordinates (1, n).
HermOp projector(const BlochPoint& n);

/// An ordered tuple Z = (Z_1..Z_n) of Hermitian operators with sum_i Z_i = 0
/// and sum_i <Z_i, Z_i> = 1.
class Direction {
 public:
  static constexpr double kTol = 1e-12;

  /// Accepts parts already in normalized form; throws ValidationError if the
  /// sum-zero or unit-norm invariant is off by more than kTol.
  static Direction from_normalized(std::vector<HermOp> parts);

  std::size_t size() const { return parts_.size(); }
  const HermOp& operator[](std::size_t i) const { return parts_[i]; }
  std::span<const HermOp> parts() const { return parts_; }

  double norm_squared() const;
  HermOp sum() const;

 private:
  explicit Direction(std::vector<HermOp> parts) : parts_(std::move(parts)) {}
  friend Direction normalize_direction(std::span<const HermOp> raw);
  std::vector<HermOp> parts_;
};

/// Maps Z_i -> (Z_i - C)/sqrt(D) with C the mean component and
/// D = sum_i <Z_i - C, Z_i - C>. Throws ValidationError when D <= 1e-14
/// (all components equal) or when fewer than two components are given.
Direction normalize_direction(std::span<const HermOp> raw);

}  // namespace steergap
