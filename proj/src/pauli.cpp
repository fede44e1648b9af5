#include "steergap/pauli.hpp"

#include <cmath>
#include <sstream>

#include "steergap/errors.hpp"

namespace steergap {

bool HermOp::is_psd(double tol) const {
  return c_[0] >= -tol && c_[0] * c_[0] - c_.tail<3>().squaredNorm() >= -tol;
}

HermOp HermOp::squared() const {
  // (x0 I + x.s)^2 / 4 = ((x0^2 + |x|^2) I + 2 x0 x.s) / 4
  const double x0 = c_[0];
  const Eigen::Vector3d x = c_.tail<3>();
  Eigen::Vector4d out;
  out[0] = 0.5 * (x0 * x0 + x.squaredNorm());
  out.tail<3>() = x0 * x;
  return HermOp(out);
}

BlochPoint::BlochPoint(const Eigen::Vector3d& n) : n_(n) {
  if (!n.allFinite() || std::abs(n.norm() - 1.0) > kUnitTol) {
    std::ostringstream msg;
    msg << "Bloch vector must have unit norm, got |n| = " << n.norm();
    throw ValidationError(msg.str());
  }
}

BlochPoint BlochPoint::normalized(const Eigen::Vector3d& v) {
  const double len = v.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw ValidationError("cannot normalize a zero or non-finite Bloch vector");
  }
  return BlochPoint(v / len, Unchecked{});
}

HermOp projector(const BlochPoint& n) {
  return HermOp(1.0, n[0], n[1], n[2]);
}

double Direction::norm_squared() const {
  double acc = 0.0;
  for (const auto& z : parts_) acc += hs_inner(z, z);
  return acc;
}

HermOp Direction::sum() const {
  HermOp acc;
  for (const auto& z : parts_) acc += z;
  return acc;
}

Direction Direction::from_normalized(std::vector<HermOp> parts) {
  Direction d(std::move(parts));
  if (d.size() < 2) throw ValidationError("a direction needs at least two components");
  if (d.sum().coords().cwiseAbs().maxCoeff() > kTol) {
    throw ValidationError("direction components do not sum to zero");
  }
  if (std::abs(d.norm_squared() - 1.0) > kTol) {
    throw ValidationError("direction does not have unit total norm");
  }
  return d;
}

Direction normalize_direction(std::span<const HermOp> raw) {
  if (raw.size() < 2) throw ValidationError("a direction needs at least two components");
  HermOp mean;
  for (const auto& z : raw) mean += z;
  mean *= 1.0 / static_cast<double>(raw.size());

  std::vector<HermOp> centered;
  centered.reserve(raw.size());
  double spread = 0.0;
  for (const auto& z : raw) {
    centered.push_back(z - mean);
    spread += hs_inner(centered.back(), centered.back());
  }
  if (!(spread > 1e-14)) {
    throw ValidationError("degenerate direction: all components are equal");
  }
  const double scale = 1.0 / std::sqrt(spread);
  for (auto& z : centered) z *= scale;
  return Direction(std::move(centered));
}

}  // namespace steergap
