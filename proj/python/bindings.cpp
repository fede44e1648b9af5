#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "steergap/annealer.hpp"
#include "steergap/capacity.hpp"
#include "steergap/errors.hpp"
#include "steergap/quadrature.hpp"
#include "steergap/record.hpp"
#include "steergap/state.hpp"

namespace py = pybind11;
namespace sg = steergap;

namespace {

// Rows of Pauli coordinates -> HermOps.
std::vector<sg::HermOp> parts_from(const std::vector<std::array<double, 4>>& rows) {
  std::vector<sg::HermOp> parts;
  parts.reserve(rows.size());
  for (const auto& r : rows) parts.emplace_back(r[0], r[1], r[2], r[3]);
  return parts;
}

std::vector<std::array<double, 4>> rows_from(const sg::Direction& d) {
  std::vector<std::array<double, 4>> rows;
  for (const auto& p : d.parts()) rows.push_back({p[0], p[1], p[2], p[3]});
  return rows;
}

sg::Mode mode_arg(const std::string& m) { return sg::parse_mode(m); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gap function of the steering inequality for two-qubit states";
  m.attr("__version__") = sg::library_version();

  py::register_exception<sg::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<sg::IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<sg::InfeasibleConfigError>(m, "InfeasibleConfigError", PyExc_RuntimeError);

  py::class_<sg::TwoQubitState>(m, "TwoQubitState")
      .def_static("from_pauli_tensor", &sg::TwoQubitState::from_pauli_tensor, py::arg("theta"))
      .def_static("from_density_matrix", &sg::TwoQubitState::from_density_matrix, py::arg("rho"))
      .def_static("load", [](const std::string& path) { return sg::load_state(path); }, py::arg("path"))
      .def_property_readonly("pauli_tensor", &sg::TwoQubitState::pauli_tensor)
      .def_property_readonly("density_matrix", &sg::TwoQubitState::density_matrix);
  m.def("werner", &sg::werner, py::arg("p"));

  py::class_<sg::Quadrature>(m, "Quadrature")
      .def_property_readonly("id", &sg::Quadrature::id)
      .def_property_readonly("nodes", &sg::Quadrature::nodes)
      .def_property_readonly("weights", &sg::Quadrature::weights)
      .def("__len__", &sg::Quadrature::size);
  m.def("product_rule", &sg::product_rule, py::arg("n_polar"), py::arg("n_azimuthal"));
  m.def("load_lebedev", [](const std::string& path) { return sg::load_lebedev(path); }, py::arg("path"));
  m.def("quadrature_from_spec", &sg::quadrature_from_spec, py::arg("spec"));

  py::class_<sg::LhsEnsemble>(m, "LhsEnsemble")
      .def_static("uniform", &sg::LhsEnsemble::uniform, py::arg("quadrature"))
      .def_static(
          "discrete",
          [](const std::vector<std::array<double, 3>>& points, const std::vector<double>& weights) {
            std::vector<sg::BlochPoint> pts;
            for (const auto& p : points) pts.emplace_back(p[0], p[1], p[2]);
            return sg::LhsEnsemble::discrete(pts, weights);
          },
          py::arg("points"), py::arg("weights"))
      .def_static("load", [](const std::string& path) { return sg::LhsEnsemble::load_discrete(path); }, py::arg("path"))
      .def_property_readonly("id", &sg::LhsEnsemble::id)
      .def("__len__", &sg::LhsEnsemble::size);

  py::class_<sg::Direction>(m, "Direction")
      .def_property_readonly("parts", &rows_from)
      .def("__len__", &sg::Direction::size);
  m.def("normalize_direction", [](const std::vector<std::array<double, 4>>& rows) {
    return sg::normalize_direction(parts_from(rows));
  }, py::arg("parts"));

  m.def("capacity_support", [](const sg::LhsEnsemble& u, const std::vector<std::array<double, 4>>& rows) {
    return sg::capacity_support(u, parts_from(rows));
  }, py::arg("ensemble"), py::arg("parts"), "Capacity support of unnormalized composite coordinates.");
  m.def("minimal_requirement_residual", &sg::minimal_requirement_residual, py::arg("ensemble"), py::arg("state"));

  py::class_<sg::AnnealConfig>(m, "AnnealConfig")
      .def(py::init<>())
      .def_readwrite("cool_factor", &sg::AnnealConfig::cool_factor)
      .def_readwrite("t_final", &sg::AnnealConfig::t_final)
      .def_readwrite("steps_per_temp_multiplier", &sg::AnnealConfig::steps_per_temp_multiplier)
      .def_readwrite("dof", &sg::AnnealConfig::dof)
      .def_readwrite("replicas", &sg::AnnealConfig::replicas)
      .def_readwrite("seed", &sg::AnnealConfig::seed)
      .def_readwrite("init_temp_multiplier", &sg::AnnealConfig::init_temp_multiplier)
      .def_readwrite("threads", &sg::AnnealConfig::threads)
      .def_readwrite("pvm_warm_start", &sg::AnnealConfig::pvm_warm_start);

  py::class_<sg::GapResult>(m, "GapResult")
      .def_readonly("gap", &sg::GapResult::gap)
      .def_readonly("replica_energies", &sg::GapResult::replica_energies)
      .def_readonly("wall_time_s", &sg::GapResult::wall_time_s)
      .def_property_readonly("annealed_gap", &sg::GapResult::annealed_gap)
      .def_property_readonly("replica_std", &sg::GapResult::replica_std)
      .def_property_readonly("best_z", [](const sg::GapResult& r) { return rows_from(r.best_z); })
      .def_property_readonly("best_e_alphas", [](const sg::GapResult& r) {
        return std::vector<double>(r.best_e.alphas().begin(), r.best_e.alphas().end());
      });

  m.def(
      "gap",
      [](const sg::TwoQubitState& rho, const sg::LhsEnsemble& u, const std::string& mode,
         const sg::AnnealConfig& cfg) {
        py::gil_scoped_release release;
        return sg::gap(rho, u, mode_arg(mode), cfg);
      },
      py::arg("state"), py::arg("ensemble"), py::arg("mode") = "pvm2", py::arg("config") = sg::AnnealConfig{});
  m.def("gap_pvm_analytic", &sg::gap_pvm_analytic, py::arg("p"));
  m.def(
      "check_direction",
      [](const sg::TwoQubitState& rho, const sg::LhsEnsemble& u, const std::vector<std::array<double, 4>>& rows,
         const sg::AnnealConfig& cfg) {
        const sg::Direction z = sg::normalize_direction(parts_from(rows));
        const sg::Mode mode = z.size() == 2 ? sg::Mode::Pvm2 : sg::Mode::Povm4;
        py::gil_scoped_release release;
        return sg::check_direction(rho, u, z, mode, cfg);
      },
      py::arg("state"), py::arg("ensemble"), py::arg("parts"), py::arg("config") = sg::AnnealConfig{});
}
