#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

#include "steergap/pauli.hpp"
#include "steergap/state.hpp"

namespace steergap {

/// Rank-1 POVM E_i = alpha_i P_i with P_i the projector onto dirs[i].
class RankOnePovm {
 public:
  static constexpr double kCompletenessTol = 1e-9;

  /// Throws ValidationError unless 0 <= alpha_i <= 1 and
  /// sum_i alpha_i (1, n_i) = (2, 0, 0, 0) within kCompletenessTol.
  RankOnePovm(std::vector<BlochPoint> dirs, std::vector<double> alphas);

  std::size_t size() const { return dirs_.size(); }
  std::span<const BlochPoint> dirs() const { return dirs_; }
  std::span<const double> alphas() const { return alphas_; }
  HermOp element(std::size_t i) const { return alphas_[i] * projector(dirs_[i]); }

  /// max_i |sum_i alpha_i (1, n_i) - (2, 0, 0, 0)|.
  double completeness_residual() const;

 private:
  std::vector<BlochPoint> dirs_;
  std::vector<double> alphas_;
};

/// Two-outcome projective measurement {P(axis), P(-axis)}.
class Pvm {
 public:
  explicit Pvm(BlochPoint axis) : axis_(axis) {}
  const BlochPoint& axis() const { return axis_; }
  RankOnePovm as_povm() const;

 private:
  BlochPoint axis_;
};

/// Outcome of the 4x4 completeness solve for rank-1 4-POVM weights.
struct AlphaSolve {
  enum class Status { Ok, Singular, OutOfRange };
  Status status = Status::Singular;
  Eigen::Vector4d alphas = Eigen::Vector4d::Zero();
  bool ok() const { return status == Status::Ok; }
};

/// Solves sum_i alpha_i (1, n_i) = (2, 0, 0, 0) for four directions with a
/// column-pivoting Householder QR. Reports Singular when the pivot ratio
/// exceeds 1e10, OutOfRange when any alpha leaves [0, 1]. Throws
/// ValidationError if dirs.size() != 4.
AlphaSolve solve_alphas(std::span<const BlochPoint> dirs);

/// Same solve with the four unit directions stored as columns.
AlphaSolve solve_alphas(const Eigen::Matrix<double, 3, 4>& dirs);

/// sum_i <Z_i, rho^{A->B}(E_i)> = sum_i Tr[rho (E_i (x) Z_i)].
double measurement_support(const TwoQubitState& rho, std::span<const HermOp> z, const RankOnePovm& e);
double measurement_support(const TwoQubitState& rho, const Direction& z, const RankOnePovm& e);

struct PvmOptimum {
  double value;
  Pvm pvm;
};

/// Exact maximum over rank-1 qubit PVMs of Tr[rho (P_1 (x) Z_1 + P_2 (x) Z_2)]:
/// lambda_max(T(Z_1 - Z_2)) + <T(Z_2), I>, attained with P_1 along the Bloch
/// vector of T(Z_1 - Z_2). Throws ValidationError unless z has two parts.
PvmOptimum pvm_support_closed_form(const TwoQubitState& rho, std::span<const HermOp> z);
PvmOptimum pvm_support_closed_form(const TwoQubitState& rho, const Direction& z);

}  // namespace steergap
