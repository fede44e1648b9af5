#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "steergap/pauli.hpp"
#include "steergap/quadrature.hpp"
#include "steergap/state.hpp"

namespace steergap {

/// Coordinates of an n-component composite operator, one column per part.
using CompositeCoords = Eigen::Matrix<double, 4, Eigen::Dynamic>;

CompositeCoords to_columns(std::span<const HermOp> parts);

/// A probability distribution over Bob's pure states, either the uniform
/// (Haar) ensemble discretized by a quadrature rule or an explicit weighted
/// point set. Both are evaluated as a weighted node set.
class LhsEnsemble {
 public:
  enum class Kind { Uniform, Discrete };

  static LhsEnsemble uniform(Quadrature q);

  /// Weights must be >= 0 and sum to 1 within 1e-12.
  static LhsEnsemble discrete(std::span<const BlochPoint> points, std::span<const double> weights);

  /// Rows "x y z w"; weights must sum to 1 within 1e-6 and are rescaled.
  static LhsEnsemble load_discrete(const std::filesystem::path& path);

  Kind kind() const { return kind_; }
  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
  const NodeMatrix& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const std::string& id() const { return id_; }

  /// Barycenter int u(P) P, in Pauli coordinates.
  HermOp barycenter() const;

 private:
  LhsEnsemble(Kind kind, NodeMatrix nodes, Eigen::VectorXd weights, std::string id)
      : kind_(kind), nodes_(std::move(nodes)), weights_(std::move(weights)), id_(std::move(id)) {}

  Kind kind_;
  NodeMatrix nodes_;
  Eigen::VectorXd weights_;
  std::string id_;
};

/// sum_k w_k max_i <Z_i, P_k>. Accepts arbitrary (unnormalized) composites.
double capacity_support(const LhsEnsemble& u, std::span<const HermOp> z);
double capacity_support(const LhsEnsemble& u, const Direction& z);

/// Index of the maximizing component at every node, lowest index on ties.
/// This is the optimal deterministic response function.
std::vector<int> greedy_response(const LhsEnsemble& u, std::span<const HermOp> z);

/// Hilbert-Schmidt norm of int u(P) P - rho_B. Zero iff u can reproduce the
/// steering image of the identity.
double minimal_requirement_residual(const LhsEnsemble& u, const TwoQubitState& rho);

/// Brute-force lower bound on the capacity support: best value of
/// sum_k w_k sum_i G_ki <Z_i, P_k> over `trials` random row-stochastic G and
/// (when include_greedy) the per-node argmax assignment. Only meaningful for
/// discrete ensembles; throws ValidationError for uniform ones.
double response_oracle(const LhsEnsemble& u, std::span<const HermOp> z, int trials, std::uint64_t seed,
                       bool include_greedy = true);

/// Capacity support of column-stored composites, for the annealing hot loop.
class CapacityKernel {
 public:
  explicit CapacityKernel(const LhsEnsemble& u);
  double operator()(const CompositeCoords& z) const;

 private:
  template <int N>
  double fixed(const CompositeCoords& z) const;
  double dynamic(const CompositeCoords& z) const;

  // Nodes split by coordinate so the per-node loop vectorizes.
  std::vector<double> x_, y_, z_, w_;
};

}  // namespace steergap
