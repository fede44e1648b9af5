#include "steergap/measurement.hpp"

#include <Eigen/QR>

#include <cmath>

#include "steergap/errors.hpp"

namespace steergap {

namespace {
constexpr double kMaxCondition = 1e10;
constexpr double kAlphaSlack = 1e-12;
}  // namespace

RankOnePovm::RankOnePovm(std::vector<BlochPoint> dirs, std::vector<double> alphas)
    : dirs_(std::move(dirs)), alphas_(std::move(alphas)) {
  if (dirs_.empty() || dirs_.size() != alphas_.size()) {
    throw ValidationError("rank-1 POVM needs one weight per direction");
  }
  for (double a : alphas_) {
    if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("rank-1 POVM weights must lie in [0, 1]");
  }
  if (completeness_residual() > kCompletenessTol) {
    throw ValidationError("rank-1 POVM elements do not sum to the identity");
  }
}

double RankOnePovm::completeness_residual() const {
  Eigen::Vector4d acc = -HermOp::identity().coords();
  for (std::size_t i = 0; i < dirs_.size(); ++i) acc += element(i).coords();
  return acc.cwiseAbs().maxCoeff();
}

RankOnePovm Pvm::as_povm() const { return RankOnePovm({axis_, axis_.antipode()}, {1.0, 1.0}); }

AlphaSolve solve_alphas(std::span<const BlochPoint> dirs) {
  if (dirs.size() != 4) throw ValidationError("alpha solve needs exactly four directions");
  Eigen::Matrix<double, 3, 4> cols;
  for (int i = 0; i < 4; ++i) cols.col(i) = dirs[static_cast<std::size_t>(i)].vec();
  return solve_alphas(cols);
}

AlphaSolve solve_alphas(const Eigen::Matrix<double, 3, 4>& dirs) {
  Eigen::Matrix4d a;
  a.row(0).setOnes();
  a.bottomRows<3>() = dirs;
  const Eigen::ColPivHouseholderQR<Eigen::Matrix4d> qr(a);
  const auto diag = qr.matrixR().diagonal().cwiseAbs();
  AlphaSolve out;
  if (!(diag.minCoeff() * kMaxCondition > diag.maxCoeff())) {
    out.status = AlphaSolve::Status::Singular;
    return out;
  }
  out.alphas = qr.solve(Eigen::Vector4d(2.0, 0.0, 0.0, 0.0));
  if ((out.alphas.array() < -kAlphaSlack).any() || (out.alphas.array() > 1.0 + kAlphaSlack).any()) {
    out.status = AlphaSolve::Status::OutOfRange;
    return out;
  }
  out.alphas = out.alphas.cwiseMax(0.0).cwiseMin(1.0);
  out.status = AlphaSolve::Status::Ok;
  return out;
}

double measurement_support(const TwoQubitState& rho, std::span<const HermOp> z, const RankOnePovm& e) {
  if (z.size() != e.size()) throw ValidationError("direction and POVM have different outcome counts");
  const SteeringMap s = steering_map(rho);
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) acc += hs_inner(z[i], s(e.element(i)));
  return acc;
}

double measurement_support(const TwoQubitState& rho, const Direction& z, const RankOnePovm& e) {
  return measurement_support(rho, z.parts(), e);
}

PvmOptimum pvm_support_closed_form(const TwoQubitState& rho, std::span<const HermOp> z) {
  if (z.size() != 2) throw ValidationError("closed-form PVM support needs a two-component direction");
  const HermOp diff = dual_map(rho, z[0] - z[1]);
  const double base = hs_inner(dual_map(rho, z[1]), HermOp::identity());
  const Eigen::Vector3d v = diff.bloch();
  const BlochPoint axis = v.norm() > 0.0 ? BlochPoint::normalized(v) : BlochPoint(0.0, 0.0, 1.0);
  return {diff.eig_max() + base, Pvm(axis)};
}

PvmOptimum pvm_support_closed_form(const TwoQubitState& rho, const Direction& z) {
  return pvm_support_closed_form(rho, z.parts());
}

}  // namespace steergap
