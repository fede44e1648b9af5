#include "steergap/quadrature.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "steergap/errors.hpp"

namespace steergap {

Quadrature::Quadrature(NodeMatrix nodes, Eigen::VectorXd weights, std::string id)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), id_(std::move(id)) {
  if (nodes_.rows() == 0) throw ValidationError("quadrature has no nodes");
  if (nodes_.rows() != weights_.size()) throw ValidationError("quadrature node/weight count mismatch");
  for (Eigen::Index k = 0; k < nodes_.rows(); ++k) {
    if (std::abs(nodes_.row(k).norm() - 1.0) > 1e-9) throw ValidationError("quadrature node is not a unit vector");
    // Re-project so downstream projector coordinates are unit to machine precision.
    nodes_.row(k).normalize();
    if (!(weights_[k] > 0.0)) throw ValidationError("quadrature weights must be positive");
  }
  weights_ /= weights_.sum();
  // Fold the rounding residue into the largest weight so the sum is exactly 1.
  Eigen::Index big = 0;
  weights_.maxCoeff(&big);
  for (int pass = 0; pass < 8; ++pass) {
    const double residue = 1.0 - weights_.sum();
    if (residue == 0.0) break;
    weights_[big] += residue;
  }
}

namespace {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      // p1 = P_n(t), p0 = P_{n-1}(t)
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    x[static_cast<std::size_t>(i)] = -t;
    x[static_cast<std::size_t>(n - 1 - i)] = t;
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

}  // namespace

Quadrature product_rule(int n_polar, int n_azimuthal) {
  if (n_polar < 2 || n_azimuthal < 4) {
    throw ValidationError("product rule needs n_polar >= 2 and n_azimuthal >= 4");
  }
  std::vector<double> ct, wt;
  gauss_legendre(n_polar, ct, wt);

  const Eigen::Index count = static_cast<Eigen::Index>(n_polar) * n_azimuthal;
  NodeMatrix nodes(count, 3);
  Eigen::VectorXd weights(count);
  const double dphi = 2.0 * std::numbers::pi / n_azimuthal;
  Eigen::Index k = 0;
  for (int i = 0; i < n_polar; ++i) {
    const double c = ct[static_cast<std::size_t>(i)];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_azimuthal; ++j, ++k) {
      const double phi = (j + 0.5) * dphi;
      nodes.row(k) << s * std::cos(phi), s * std::sin(phi), c;
      weights[k] = wt[static_cast<std::size_t>(i)] / (2.0 * n_azimuthal);
    }
  }
  std::ostringstream id;
  id << "product:" << n_polar << "x" << n_azimuthal;
  return Quadrature(std::move(nodes), std::move(weights), id.str());
}

Quadrature load_lebedev(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open quadrature file: " + path.string());

  std::vector<std::array<double, 4>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::array<double, 4> r{};
    std::string extra;
    if (!(ls >> r[0] >> r[1] >> r[2] >> r[3]) || (ls >> extra)) {
      throw FormatError("malformed quadrature row " + std::to_string(lineno) + ": expected 'x y z w'");
    }
    const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if (std::abs(len - 1.0) > 1e-9) {
      throw FormatError("quadrature row " + std::to_string(lineno) + " is not a unit vector");
    }
    if (!(r[3] > 0.0)) throw FormatError("quadrature row " + std::to_string(lineno) + " has a non-positive weight");
    rows.push_back(r);
  }
  if (rows.empty()) throw FormatError("quadrature file has no nodes: " + path.string());

  NodeMatrix nodes(static_cast<Eigen::Index>(rows.size()), 3);
  Eigen::VectorXd weights(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    nodes.row(i) << rows[k][0], rows[k][1], rows[k][2];
    weights[i] = rows[k][3];
  }
  const double total = weights.sum();
  if (std::abs(total - 1.0) > 1e-6 && std::abs(total - 4.0 * std::numbers::pi) > 1e-6) {
    std::ostringstream msg;
    msg << "quadrature weights sum to " << total << ", expected 1 or 4*pi";
    throw FormatError(msg.str());
  }
  return Quadrature(std::move(nodes), std::move(weights), "lebedev:" + path.string());
}

Quadrature quadrature_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ValidationError("quadrature must be 'product:L[xM]' or 'lebedev:<path>'");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "lebedev") return load_lebedev(arg);
  if (kind == "product") {
    int polar = 0, azim = 0;
    char sep = 0;
    std::istringstream ss(arg);
    if (!(ss >> polar)) throw ValidationError("bad product quadrature size: " + arg);
    if (ss >> sep) {
      if (sep != 'x' || !(ss >> azim)) throw ValidationError("bad product quadrature size: " + arg);
    } else {
      azim = 2 * polar;
    }
    std::string rest;
    if (ss >> rest) throw ValidationError("bad product quadrature size: " + arg);
    return product_rule(polar, azim);
  }
  throw ValidationError("unknown quadrature kind: " + kind);
}

}  // namespace steergap
