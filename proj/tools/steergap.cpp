// steergap: gap function of the steering inequality for two-qubit states.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error, 3 infeasible
// configuration (including a failed check-lhs).

#include <CLI11.hpp>

#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "steergap/annealer.hpp"
#include "steergap/errors.hpp"
#include "steergap/record.hpp"

namespace sg = steergap;

namespace {

constexpr double kRequirementTol = 1e-6;

struct CommonOptions {
  std::string mode = "pvm2";
  std::string lhs = "uniform";
  std::string quadrature = "product:32x64";
  sg::AnnealConfig anneal;
};

void add_anneal_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--mode", o.mode, "Measurement class: pvm2 or povm4")->capture_default_str();
  cmd->add_option("--lhs", o.lhs, "LHS ensemble: uniform or discrete:<path>")->capture_default_str();
  cmd->add_option("--quadrature", o.quadrature, "Sphere rule: product:L[xM] or lebedev:<path>")
      ->capture_default_str();
  cmd->add_option("--replicas", o.anneal.replicas, "Independent cooling runs")->capture_default_str();
  cmd->add_option("--seed", o.anneal.seed, "Master RNG seed")->capture_default_str();
  cmd->add_option("--threads", o.anneal.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--cool-factor", o.anneal.cool_factor, "Temperature factor per level")->capture_default_str();
  cmd->add_option("--t-final", o.anneal.t_final, "Stopping temperature")->capture_default_str();
  cmd->add_option("--steps-multiplier", o.anneal.steps_per_temp_multiplier, "Metropolis steps per level / dof")
      ->capture_default_str();
  cmd->add_option("--dof", o.anneal.dof, "Degrees of freedom for step budgeting (0 = mode default)")
      ->capture_default_str();
  cmd->add_option("--init-temp-multiplier", o.anneal.init_temp_multiplier, "T0 samples / dof")
      ->capture_default_str();
  cmd->add_flag("!--no-pvm-warm-start", o.anneal.pvm_warm_start, "povm4: skip the embedded pvm2 candidate");
}

void require_minimal(const sg::LhsEnsemble& u, const sg::TwoQubitState& rho) {
  const double r = sg::minimal_requirement_residual(u, rho);
  if (r > kRequirementTol) {
    std::ostringstream msg;
    msg << "LHS ensemble fails the barycenter requirement for this state (residual " << r << ")";
    throw sg::InfeasibleConfigError(msg.str());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sg::IoError("cannot write " + path);
  out << text;
  if (!out) throw sg::IoError("failed writing " + path);
}

int run_gap(const std::string& state_spec, const CommonOptions& o, const std::string& out_path, bool reproducible) {
  const auto state = sg::state_from_spec(state_spec);
  const auto mode = sg::parse_mode(o.mode);
  const auto u = sg::ensemble_from_spec(o.lhs, o.quadrature);
  require_minimal(u, state.state);
  const auto result = sg::gap(state.state, u, mode, o.anneal);
  const auto record = sg::make_record(result, state, u, o.quadrature, reproducible);
  std::cout << std::setprecision(12) << record.gap << '\n';
  if (!out_path.empty()) write_text(out_path, sg::to_json(record).dump(2) + "\n");
  return 0;
}

int run_curve(double p_from, double p_to, int p_steps, const CommonOptions& o, const std::string& out_path,
              bool parallel) {
  if (!(p_from >= 0.0 && p_from <= p_to && p_to <= 1.0)) {
    throw sg::ValidationError("need 0 <= p-from <= p-to <= 1");
  }
  if (p_steps < 1) throw sg::ValidationError("p-steps must be at least 1");
  const auto mode = sg::parse_mode(o.mode);
  const auto u = sg::ensemble_from_spec(o.lhs, o.quadrature);

  std::vector<sg::CurveRow> rows(static_cast<std::size_t>(p_steps));
  auto point = [&](std::size_t k) {
    const double p = p_steps == 1 ? p_from : p_from + (p_to - p_from) * static_cast<double>(k) / (p_steps - 1);
    const auto rho = sg::werner(p);
    const auto result = sg::gap(rho, u, mode, o.anneal);
    rows[k] = {p, sg::gap_pvm_analytic(p), result.gap, result.replica_std()};
  };
  // Every Werner state has rho_B = I/2, so one check covers the grid.
  require_minimal(u, sg::werner(p_from));
  if (parallel) {
    std::vector<std::exception_ptr> errors(rows.size());
    {
      std::vector<std::jthread> pool;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        pool.emplace_back([&, k] {
          try {
            point(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t k = 0; k < rows.size(); ++k) point(k);
  }
  const std::string table = sg::format_curve(rows);
  if (out_path.empty()) {
    std::cout << table;
  } else {
    write_text(out_path, table);
  }
  return 0;
}

int run_check_lhs(const std::string& state_spec, const std::string& lhs, const std::string& quadrature) {
  const auto state = sg::state_from_spec(state_spec);
  const auto u = sg::ensemble_from_spec(lhs, quadrature);
  const double r = sg::minimal_requirement_residual(u, state.state);
  const bool pass = r <= kRequirementTol;
  std::cout << "residual " << std::setprecision(6) << r << '\n' << (pass ? "pass" : "fail") << '\n';
  return pass ? 0 : 3;
}

int run_witness(const std::string& state_spec, const std::string& direction_path, const CommonOptions& o) {
  const auto state = sg::state_from_spec(state_spec);
  const auto z = sg::load_direction(direction_path);
  const auto u = sg::ensemble_from_spec(o.lhs, o.quadrature);
  require_minimal(u, state.state);
  sg::Mode mode;
  if (z.size() == 2) {
    mode = sg::Mode::Pvm2;
  } else if (z.size() == 4) {
    mode = sg::Mode::Povm4;
  } else {
    throw sg::ValidationError("direction must have 2 (pvm2) or 4 (povm4) components");
  }
  const double margin = sg::check_direction(state.state, u, z, mode, o.anneal);
  std::cout << "margin " << std::setprecision(12) << margin << '\n';
  if (margin < 0.0) std::cout << "steering witness found\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steering gap function for two-qubit states"};
  app.require_subcommand(1);

  CommonOptions gap_opts;
  std::string gap_state, gap_out;
  bool gap_repro = false;
  auto* gap_cmd = app.add_subcommand("gap", "Compute the gap function at one state");
  gap_cmd->add_option("--state", gap_state, "werner:<p> or a JSON state file")->required();
  gap_cmd->add_option("--out", gap_out, "Write the JSON run record here");
  gap_cmd->add_flag("--reproducible", gap_repro, "Pin timestamp and wall time in the record");
  add_anneal_options(gap_cmd, gap_opts);

  CommonOptions curve_opts;
  double p_from = 0.0, p_to = 1.0;
  int p_steps = 11;
  std::string curve_out;
  bool curve_parallel = false;
  auto* curve_cmd = app.add_subcommand("curve", "Gap function of Werner states over a grid of p");
  curve_cmd->add_option("--p-from", p_from)->capture_default_str();
  curve_cmd->add_option("--p-to", p_to)->capture_default_str();
  curve_cmd->add_option("--p-steps", p_steps, "Number of grid points")->capture_default_str();
  curve_cmd->add_option("--out", curve_out, "Write the CSV table here instead of stdout");
  curve_cmd->add_flag("--parallel", curve_parallel, "Run grid points concurrently");
  add_anneal_options(curve_cmd, curve_opts);

  std::string lhs_state, lhs_spec = "uniform", lhs_quad = "product:32x64";
  auto* lhs_cmd = app.add_subcommand("check-lhs", "Check the LHS barycenter requirement");
  lhs_cmd->add_option("--state", lhs_state, "werner:<p> or a JSON state file")->required();
  lhs_cmd->add_option("--lhs", lhs_spec, "uniform or discrete:<path>")->capture_default_str();
  lhs_cmd->add_option("--quadrature", lhs_quad, "Sphere rule for the uniform ensemble")->capture_default_str();

  CommonOptions wit_opts;
  std::string wit_state, wit_dir;
  auto* wit_cmd = app.add_subcommand("witness", "Steering-inequality margin in one direction");
  wit_cmd->add_option("--state", wit_state, "werner:<p> or a JSON state file")->required();
  wit_cmd->add_option("--direction", wit_dir, "File of n rows with four Pauli coordinates")->required();
  add_anneal_options(wit_cmd, wit_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gap_cmd) return run_gap(gap_state, gap_opts, gap_out, gap_repro);
    if (*curve_cmd) return run_curve(p_from, p_to, p_steps, curve_opts, curve_out, curve_parallel);
    if (*lhs_cmd) return run_check_lhs(lhs_state, lhs_spec, lhs_quad);
    if (*wit_cmd) return run_witness(wit_state, wit_dir, wit_opts);
  } catch (const sg::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const sg::InfeasibleConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const sg::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
