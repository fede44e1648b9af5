#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "steergap/capacity.hpp"
#include "steergap/errors.hpp"
#include "steergap/quadrature.hpp"
#include "steergap/state.hpp"

using namespace steergap;

namespace {

std::filesystem::path data_file(const char* name) { return std::filesystem::path(STEERGAP_DATA_DIR) / name; }

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("steergap_test_" + name);
  std::ofstream(path) << text;
  return path;
}

Eigen::Vector3d first_moment(const Quadrature& q) { return q.nodes().transpose() * q.weights(); }

Eigen::Matrix3d second_moment(const Quadrature& q) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (std::size_t k = 0; k < q.size(); ++k) m += q.weight(k) * q.node(k).vec() * q.node(k).vec().transpose();
  return m;
}

// Uniform-sphere mean of z^d: 1/(d+1) for even d, 0 for odd d.
double z_power_mean(int d) { return d % 2 ? 0.0 : 1.0 / (d + 1); }

}  // namespace

TEST_CASE("product rule moments") {
  for (auto [l, m] : {std::pair{2, 4}, {8, 16}, {16, 32}, {32, 64}, {64, 128}}) {
    const Quadrature q = product_rule(l, m);
    CHECK(q.size() == static_cast<std::size_t>(l * m));
    CHECK(q.weights().sum() == 1.0);
    CHECK((q.weights().array() > 0).all());
    CHECK(first_moment(q).norm() <= 1e-12);
    if (l >= 8) CHECK((second_moment(q) - Eigen::Matrix3d::Identity() / 3.0).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("product rule is exact on low-degree polar monomials") {
  for (int l : {4, 8, 16}) {
    const Quadrature q = product_rule(l, 2 * l);
    for (int d = 0; d <= 2 * l - 1; ++d) {
      const double v = integrate(q, [&](const HermOp& p) { return std::pow(p[3], d); });
      CHECK(std::abs(v - z_power_mean(d)) <= 1e-13);
    }
  }
}

TEST_CASE("product rule is exact on low-degree azimuthal terms") {
  const Quadrature q = product_rule(8, 16);
  // x^2 y^2 has mean 1/15, x^4 has mean 1/5.
  CHECK(std::abs(integrate(q, [](const HermOp& p) { return p[1] * p[1] * p[2] * p[2]; }) - 1.0 / 15) <= 1e-14);
  CHECK(std::abs(integrate(q, [](const HermOp& p) { return std::pow(p[1], 4); }) - 1.0 / 5) <= 1e-14);
}

TEST_CASE("product rule rejects degenerate sizes") {
  CHECK_THROWS_AS(product_rule(1, 8), ValidationError);
  CHECK_THROWS_AS(product_rule(4, 3), ValidationError);
}

TEST_CASE("integrate examples") {
  const Quadrature q = product_rule(32, 64);
  CHECK(std::abs(integrate(q, [](const HermOp&) { return 1.0; }) - 1.0) <= 1e-12);
  const HermOp sz(0, 0, 0, 1);
  CHECK(std::abs(integrate(q, [&](const HermOp& p) { return hs_inner(sz, p); })) <= 1e-14);
  // max(<sz/2, P>, <-sz/2, P>) = |n_z|/2, mean 1/4. Accuracy limited by the kink at the equator.
  const double hemi = integrate(q, [&](const HermOp& p) { return std::max(hs_inner(sz, p), hs_inner(-sz, p)); });
  CHECK(std::abs(hemi - 0.25) <= 1e-3);
}

TEST_CASE("kinked integrand converges under refinement") {
  const HermOp sz(0, 0, 0, 1);
  auto hemi = [&](int l) {
    return integrate(product_rule(l, 2 * l), [&](const HermOp& p) { return std::max(hs_inner(sz, p), hs_inner(-sz, p)); });
  };
  // The kink sits on the polar grid here, the slowest case: the error falls
  // as 1/L^2 and drops below 1e-5 per doubling from L = 128 on.
  const double h32 = hemi(32), h64 = hemi(64), h128 = hemi(128), h256 = hemi(256);
  CHECK(std::abs(h128 - h256) < 1e-5);
  CHECK(std::abs(h64 - h128) < std::abs(h32 - h64));
  CHECK(std::abs(h256 - 0.25) < std::abs(h128 - 0.25));
}

TEST_CASE("octahedral rule") {
  const Quadrature q = load_lebedev(data_file("octahedron_6.txt"));
  CHECK(q.size() == 6);
  CHECK(std::abs(q.weights().sum() - 1.0) <= 1e-12);
  CHECK(first_moment(q).norm() <= 1e-15);
  CHECK((second_moment(q) - Eigen::Matrix3d::Identity() / 3.0).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("5810-point Lebedev rule") {
  const Quadrature q = load_lebedev(data_file("lebedev_5810.txt"));
  CHECK(q.size() == 5810);
  CHECK(std::abs(q.weights().sum() - 1.0) <= 1e-12);
  CHECK(first_moment(q).norm() <= 1e-12);
  CHECK((second_moment(q) - Eigen::Matrix3d::Identity() / 3.0).cwiseAbs().maxCoeff() <= 1e-10);
  // Smooth polynomials are integrated to rounding; the kinked |n_z| is not
  // (checked separately in the acceptance suite).
  CHECK(std::abs(integrate(q, [](const HermOp& p) { return std::pow(p[3], 20); }) - 1.0 / 21) <= 1e-13);
}

TEST_CASE("rule files") {
  SUBCASE("4 pi normalization is accepted") {
    const double w = 4.0 * M_PI / 6.0;
    std::string text;
    for (const char* n : {"1 0 0", "-1 0 0", "0 1 0", "0 -1 0", "0 0 1", "0 0 -1"}) text += std::string(n) + " " + std::to_string(w) + "\n";
    const auto path = write_temp("oct4pi.txt", text);
    const Quadrature q = load_lebedev(path);
    CHECK(std::abs(q.weights().sum() - 1.0) <= 1e-12);
    std::filesystem::remove(path);
  }
  SUBCASE("bad weight sum") {
    const auto path = write_temp("badsum.txt", "0 0 1 0.3\n0 0 -1 0.3\n");
    CHECK_THROWS_AS(load_lebedev(path), FormatError);
    std::filesystem::remove(path);
  }
  SUBCASE("malformed row") {
    const auto path = write_temp("badrow.txt", "0 0 1\n");
    CHECK_THROWS_AS(load_lebedev(path), FormatError);
    std::filesystem::remove(path);
  }
  SUBCASE("empty file") {
    const auto path = write_temp("empty.txt", "# nothing\n\n");
    CHECK_THROWS_AS(load_lebedev(path), FormatError);
    std::filesystem::remove(path);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_lebedev("/nonexistent/rule.txt"), IoError); }
}

TEST_CASE("quadrature specs") {
  CHECK(quadrature_from_spec("product:8").size() == 8 * 16);
  CHECK(quadrature_from_spec("product:8x10").size() == 80);
  CHECK(quadrature_from_spec("product:8x10").id() == "product:8x10");
  CHECK(quadrature_from_spec("lebedev:" + data_file("octahedron_6.txt").string()).size() == 6);
  CHECK_THROWS_AS(quadrature_from_spec("gauss:8"), ValidationError);
  CHECK_THROWS_AS(quadrature_from_spec("product:abc"), ValidationError);
}
