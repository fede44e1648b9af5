#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>

#include "steergap/pauli.hpp"

namespace steergap {

using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// A cubature rule on the Bloch sphere with weights normalized to the Haar
/// probability measure (sum w = 1).
class Quadrature {
 public:
  /// Validates shapes, unit nodes and positive weights, then rescales the
  /// weights to sum to one. Throws ValidationError.
  Quadrature(NodeMatrix nodes, Eigen::VectorXd weights, std::string id);

  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
  const NodeMatrix& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  BlochPoint node(std::size_t k) const { return BlochPoint::normalized(nodes_.row(static_cast<Eigen::Index>(k)).transpose()); }
  double weight(std::size_t k) const { return weights_[static_cast<Eigen::Index>(k)]; }

  /// "product:LxM" or "lebedev:<path>"; recorded in run provenance.
  const std::string& id() const { return id_; }

 private:
  NodeMatrix nodes_;
  Eigen::VectorXd weights_;
  std::string id_;
};

/// Gauss-Legendre nodes in cos(theta) crossed with `n_azimuthal` equally
/// spaced azimuths (offset by half a step). Requires n_polar >= 2 and
/// n_azimuthal >= 4.
Quadrature product_rule(int n_polar, int n_azimuthal);

/// Reads rows "x y z w". Weights may be normalized to 1 or to 4*pi (each
/// within 1e-6); either way they are rescaled to 1. Blank lines and lines
/// starting with '#' are skipped. Throws IoError / FormatError.
Quadrature load_lebedev(const std::filesystem::path& path);

/// Parses "product:L", "product:LxM" or "lebedev:<path>". "product:L" means
/// L polar by 2L azimuthal nodes.
Quadrature quadrature_from_spec(const std::string& spec);

/// sum_k w_k f(P_k) with P_k the projector onto node k.
template <typename F>
double integrate(const Quadrature& q, F&& f) {
  double acc = 0.0;
  const auto& nodes = q.nodes();
  for (Eigen::Index k = 0; k < nodes.rows(); ++k) {
    acc += q.weights()[k] * f(HermOp(1.0, nodes(k, 0), nodes(k, 1), nodes(k, 2)));
  }
  return acc;
}

}  // namespace steergap
