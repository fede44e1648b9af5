#include "steergap/state.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <array>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "steergap/errors.hpp"

namespace steergap {

using nlohmann::json;

const Eigen::Matrix2cd& pauli_matrix(int i) {
  static const std::array<Eigen::Matrix2cd, 4> sigma = [] {
    using C = std::complex<double>;
    std::array<Eigen::Matrix2cd, 4> s;
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, C(0, -1), C(0, 1), 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  return sigma.at(static_cast<std::size_t>(i));
}

namespace {

Eigen::Matrix4cd reconstruct(const Eigen::Matrix4d& theta) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (theta(i, j) == 0.0) continue;
      rho += theta(i, j) * Eigen::Matrix4cd(Eigen::kroneckerProduct(pauli_matrix(i), pauli_matrix(j)));
    }
  }
  return 0.25 * rho;
}

}  // namespace

TwoQubitState TwoQubitState::from_pauli_tensor(const Eigen::Matrix4d& theta) {
  if (!theta.allFinite()) throw FormatError("Pauli tensor has non-finite entries");
  if (std::abs(theta(0, 0) - 1.0) > kPsdTol) {
    std::ostringstream msg;
    msg << "state must have unit trace, got theta_00 = " << theta(0, 0);
    throw TraceError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(reconstruct(theta), Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -kPsdTol) {
    std::ostringstream msg;
    msg << "state is not positive semidefinite, smallest eigenvalue " << lowest;
    throw PsdError(msg.str());
  }
  return TwoQubitState(theta);
}

TwoQubitState TwoQubitState::from_density_matrix(const Eigen::Matrix4cd& rho) {
  if (!rho.allFinite()) throw FormatError("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kPsdTol) {
    throw ValidationError("density matrix is not Hermitian");
  }
  Eigen::Matrix4d theta;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Eigen::Matrix4cd basis = Eigen::kroneckerProduct(pauli_matrix(i), pauli_matrix(j));
      theta(i, j) = (rho * basis).trace().real();
    }
  }
  return from_pauli_tensor(theta);
}

Eigen::Matrix4cd TwoQubitState::density_matrix() const { return reconstruct(theta_); }

TwoQubitState werner(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("Werner mixing p must lie in [0, 1]");
  Eigen::Matrix4d theta = Eigen::Vector4d(1.0, -p, -p, -p).asDiagonal();
  return TwoQubitState::from_pauli_tensor(theta);
}

SteeringMap steering_map(const TwoQubitState& rho) {
  return SteeringMap(0.5 * rho.pauli_tensor().transpose());
}

HermOp dual_map(const TwoQubitState& rho, const HermOp& z) {
  return HermOp(0.5 * rho.pauli_tensor() * z.coords());
}

namespace {

Eigen::Matrix4d read_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 4) {
    throw FormatError(std::string(what) + " must be a 4x4 array");
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 4) {
      throw FormatError(std::string(what) + " must be a 4x4 array");
    }
    for (int c = 0; c < 4; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw FormatError(std::string(what) + " entries must be numbers");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

TwoQubitState parse_state(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.size() != 1) {
    throw FormatError("state file must be an object with exactly one of 'pauli_tensor' or 'density_matrix'");
  }
  if (doc.contains("pauli_tensor")) {
    return TwoQubitState::from_pauli_tensor(read_matrix(doc["pauli_tensor"], "pauli_tensor"));
  }
  if (doc.contains("density_matrix")) {
    const auto& dm = doc["density_matrix"];
    if (!dm.is_object()) throw FormatError("density_matrix must be an object with 're' and 'im'");
    for (const auto& [key, _] : dm.items()) {
      if (key != "re" && key != "im") throw FormatError("unknown key in density_matrix: " + key);
    }
    if (!dm.contains("re")) throw FormatError("density_matrix requires 're'");
    Eigen::Matrix4cd rho = read_matrix(dm["re"], "density_matrix.re").cast<std::complex<double>>();
    if (dm.contains("im")) {
      rho += std::complex<double>(0, 1) * read_matrix(dm["im"], "density_matrix.im").cast<std::complex<double>>();
    }
    return TwoQubitState::from_density_matrix(rho);
  }
  throw FormatError("unknown key in state file: " + doc.begin().key());
}

TwoQubitState load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str());
}

}  // namespace steergap
