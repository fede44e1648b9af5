#pragma once

#include <Eigen/Core>

#include <filesystem>

#include "steergap/pauli.hpp"

namespace steergap {

/// Linear map X -> Tr_A[rho (X (x) I_B)] acting on Pauli coordinates.
class SteeringMap {
 public:
  explicit SteeringMap(const Eigen::Matrix4d& s) : s_(s) {}

  const Eigen::Matrix4d& matrix() const { return s_; }
  HermOp operator()(const HermOp& x) const { return HermOp(s_ * x.coords()); }

 private:
  Eigen::Matrix4d s_;
};

/// Two-qubit state held as its Pauli correlation tensor
/// theta_ij = Tr[rho (sigma_i (x) sigma_j)], so that
/// rho = (1/4) sum_ij theta_ij sigma_i (x) sigma_j.
class TwoQubitState {
 public:
  static constexpr double kPsdTol = 1e-10;

  /// Validates unit trace and positivity; throws TraceError / PsdError.
  static TwoQubitState from_pauli_tensor(const Eigen::Matrix4d& theta);

  /// Basis order |00>, |01>, |10>, |11>; the matrix must be Hermitian.
  static TwoQubitState from_density_matrix(const Eigen::Matrix4cd& rho);

  const Eigen::Matrix4d& pauli_tensor() const { return theta_; }
  Eigen::Matrix4cd density_matrix() const;

  /// Reduced state of Bob, rho_B = Tr_A rho, which is the image of I_A.
  HermOp reduced_b() const { return HermOp(theta_.row(0).transpose()); }
  HermOp reduced_a() const { return HermOp(theta_.col(0)); }

 private:
  explicit TwoQubitState(const Eigen::Matrix4d& theta) : theta_(theta) {}
  Eigen::Matrix4d theta_;
};

/// W_p = p |psi-><psi-| + (1-p) I/4. Throws ValidationError for p outside [0,1].
TwoQubitState werner(double p);

/// In Pauli coordinates the steering map is s = theta^T / 2.
SteeringMap steering_map(const TwoQubitState& rho);

/// Adjoint of the steering map: T(Z) = Tr_B[rho (I (x) Z)], so that
/// Tr[rho (P (x) Z)] = <T(Z), P>. In coordinates T(z) = theta z / 2.
HermOp dual_map(const TwoQubitState& rho, const HermOp& z);

/// Reads a JSON state document, either
///   {"pauli_tensor": [[...4], x4]}
/// or
///   {"density_matrix": {"re": [[...4], x4], "im": [[...4], x4]}}.
/// Unknown keys are rejected. Throws IoError, FormatError, TraceError or
/// PsdError.
TwoQubitState load_state(const std::filesystem::path& path);
TwoQubitState parse_state(const std::string& text);

/// Pauli matrices sigma_0..sigma_3.
const Eigen::Matrix2cd& pauli_matrix(int i);

}  // namespace steergap
