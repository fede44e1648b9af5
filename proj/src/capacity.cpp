#include "steergap/capacity.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "steergap/errors.hpp"

namespace steergap {

CompositeCoords to_columns(std::span<const HermOp> parts) {
  CompositeCoords z(4, static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) z.col(static_cast<Eigen::Index>(i)) = parts[i].coords();
  return z;
}

LhsEnsemble LhsEnsemble::uniform(Quadrature q) {
  return LhsEnsemble(Kind::Uniform, q.nodes(), q.weights(), "uniform/" + q.id());
}

LhsEnsemble LhsEnsemble::discrete(std::span<const BlochPoint> points, std::span<const double> weights) {
  if (points.empty()) throw ValidationError("discrete ensemble needs at least one point");
  if (points.size() != weights.size()) throw ValidationError("discrete ensemble point/weight count mismatch");
  NodeMatrix nodes(static_cast<Eigen::Index>(points.size()), 3);
  Eigen::VectorXd w(static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(weights[k] >= 0.0)) throw ValidationError("discrete ensemble weights must be non-negative");
    nodes.row(static_cast<Eigen::Index>(k)) = points[k].vec().transpose();
    w[static_cast<Eigen::Index>(k)] = weights[k];
  }
  if (std::abs(w.sum() - 1.0) > 1e-12) throw ValidationError("discrete ensemble weights must sum to 1");
  return LhsEnsemble(Kind::Discrete, std::move(nodes), std::move(w), "discrete");
}

LhsEnsemble LhsEnsemble::load_discrete(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ensemble file: " + path.string());
  std::vector<BlochPoint> points;
  std::vector<double> weights;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double x, y, z, w;
    std::string extra;
    if (!(ls >> x >> y >> z >> w) || (ls >> extra)) {
      throw FormatError("malformed ensemble row " + std::to_string(lineno) + ": expected 'x y z w'");
    }
    const Eigen::Vector3d v(x, y, z);
    if (std::abs(v.norm() - 1.0) > 1e-9) {
      throw FormatError("ensemble row " + std::to_string(lineno) + " is not a unit vector");
    }
    points.push_back(BlochPoint::normalized(v));
    weights.push_back(w);
  }
  if (points.empty()) throw FormatError("ensemble file has no points: " + path.string());
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0) > 1e-6) throw FormatError("ensemble weights must sum to 1");
  for (double& w : weights) w /= total;
  // Renormalization can leave the sum off by an ulp or so.
  double resum = 0.0;
  for (double w : weights) resum += w;
  weights.back() += 1.0 - resum;
  auto u = discrete(points, weights);
  u.id_ = "discrete:" + path.string();
  return u;
}

HermOp LhsEnsemble::barycenter() const {
  Eigen::Vector4d c;
  c[0] = weights_.sum();
  c.tail<3>() = nodes_.transpose() * weights_;
  return HermOp(c);
}

CapacityKernel::CapacityKernel(const LhsEnsemble& u) {
  const auto n = static_cast<std::size_t>(u.nodes().rows());
  x_.resize(n);
  y_.resize(n);
  z_.resize(n);
  w_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    x_[k] = u.nodes()(i, 0);
    y_[k] = u.nodes()(i, 1);
    z_[k] = u.nodes()(i, 2);
    w_[k] = u.weights()[i];
  }
}

// <Z_i, P_k> = (z_i0 + z_i . n_k) / 2
template <int N>
double CapacityKernel::fixed(const CompositeCoords& z) const {
  const auto n = static_cast<Eigen::Index>(w_.size());
  const Eigen::Map<const Eigen::ArrayXd> xs(x_.data(), n), ys(y_.data(), n), zs(z_.data(), n), ws(w_.data(), n);
  auto part = [&](int i) { return z(0, i) + z(1, i) * xs + z(2, i) * ys + z(3, i) * zs; };
  if constexpr (N == 2) {
    return 0.5 * (ws * part(0).max(part(1))).sum();
  } else if constexpr (N == 3) {
    return 0.5 * (ws * part(0).max(part(1)).max(part(2))).sum();
  } else {
    static_assert(N == 4);
    return 0.5 * (ws * part(0).max(part(1)).max(part(2)).max(part(3))).sum();
  }
}

double CapacityKernel::dynamic(const CompositeCoords& z) const {
  const std::size_t n = w_.size();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector4d p(1.0, x_[k], y_[k], z_[k]);
    acc += w_[k] * (p.transpose() * z).maxCoeff();
  }
  return 0.5 * acc;
}

double CapacityKernel::operator()(const CompositeCoords& z) const {
  switch (z.cols()) {
    case 2:
      return fixed<2>(z);
    case 3:
      return fixed<3>(z);
    case 4:
      return fixed<4>(z);
    default:
      return dynamic(z);
  }
}

double capacity_support(const LhsEnsemble& u, std::span<const HermOp> z) {
  if (z.empty()) return 0.0;
  return CapacityKernel(u)(to_columns(z));
}

double capacity_support(const LhsEnsemble& u, const Direction& z) { return capacity_support(u, z.parts()); }

std::vector<int> greedy_response(const LhsEnsemble& u, std::span<const HermOp> z) {
  std::vector<int> best(u.size(), 0);
  const auto& nodes = u.nodes();
  for (Eigen::Index k = 0; k < nodes.rows(); ++k) {
    const HermOp p(1.0, nodes(k, 0), nodes(k, 1), nodes(k, 2));
    double top = -INFINITY;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double v = hs_inner(z[i], p);
      if (v > top) {
        top = v;
        best[static_cast<std::size_t>(k)] = static_cast<int>(i);
      }
    }
  }
  return best;
}

double minimal_requirement_residual(const LhsEnsemble& u, const TwoQubitState& rho) {
  const HermOp diff = u.barycenter() - rho.reduced_b();
  return std::sqrt(hs_inner(diff, diff));
}

double response_oracle(const LhsEnsemble& u, std::span<const HermOp> z, int trials, std::uint64_t seed,
                       bool include_greedy) {
  if (u.kind() != LhsEnsemble::Kind::Discrete) {
    throw ValidationError("response oracle requires a discrete ensemble");
  }
  const auto& nodes = u.nodes();
  const auto& w = u.weights();
  const std::size_t n = z.size();
  if (n == 0) return 0.0;

  // Per-node scores <Z_i, P_k>.
  Eigen::MatrixXd score(nodes.rows(), static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < nodes.rows(); ++k) {
    const HermOp p(1.0, nodes(k, 0), nodes(k, 1), nodes(k, 2));
    for (std::size_t i = 0; i < n; ++i) score(k, static_cast<Eigen::Index>(i)) = hs_inner(z[i], p);
  }

  double best = -INFINITY;
  if (include_greedy) {
    const auto g = greedy_response(u, z);
    double v = 0.0;
    for (Eigen::Index k = 0; k < nodes.rows(); ++k) v += w[k] * score(k, g[static_cast<std::size_t>(k)]);
    best = v;
  }

  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd row(static_cast<Eigen::Index>(n));
  for (int t = 0; t < trials; ++t) {
    double v = 0.0;
    for (Eigen::Index k = 0; k < nodes.rows(); ++k) {
      // Normalized exponentials: a uniform draw from the probability simplex.
      for (Eigen::Index i = 0; i < row.size(); ++i) row[i] = expo(rng);
      row /= row.sum();
      v += w[k] * score.row(k).dot(row);
    }
    best = std::max(best, v);
  }
  return best;
}

}  // namespace steergap
