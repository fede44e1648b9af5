#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "steergap/annealer.hpp"
#include "steergap/capacity.hpp"
#include "steergap/state.hpp"

namespace steergap {

std::string library_version();

/// "werner:<p>" or a path to a JSON state file.
struct StateSpec {
  TwoQubitState state;
  std::optional<double> werner_p;
  std::string id;
};
StateSpec state_from_spec(const std::string& spec);

/// "uniform" (over the given quadrature) or "discrete:<path>".
LhsEnsemble ensemble_from_spec(const std::string& spec, const std::string& quadrature_spec);

/// Reads n rows of four reals (Pauli coordinates, not yet normalized) and
/// maps them into C^n. Throws IoError, FormatError or ValidationError.
Direction load_direction(const std::filesystem::path& path);

/// Everything needed to reproduce and audit a single gap computation.
struct RunRecord {
  std::string version;
  std::string timestamp;
  std::string state;
  std::optional<double> p;
  std::string mode;
  std::string lhs;
  std::string quadrature;
  AnnealConfig config;
  double gap = 0.0;
  /// Best replica energy, before the povm4 warm-start candidate.
  double gap_annealed = 0.0;
  std::optional<double> gap_pvm_analytic;
  std::vector<std::array<double, 4>> best_z;
  std::vector<std::array<double, 3>> best_e_dirs;
  std::vector<double> best_e_alphas;
  std::vector<double> replica_energies;
  double replica_std = 0.0;
  double wall_time_s = 0.0;

  bool operator==(const RunRecord&) const = default;
};

/// Builds a record from a finished run. With `reproducible` the timestamp
/// and wall time are pinned so identical inputs give identical bytes.
RunRecord make_record(const GapResult& result, const StateSpec& state, const LhsEnsemble& u,
                      const std::string& quadrature_id, bool reproducible);

nlohmann::json to_json(const RunRecord& r);
RunRecord record_from_json(const nlohmann::json& j);

/// One row of a gap-versus-p curve.
struct CurveRow {
  double p;
  double gap_pvm_analytic;
  double gap_numeric;
  double replica_std;
  bool operator==(const CurveRow&) const = default;
};

/// Comma-separated with header "p,gap_pvm_analytic,gap_numeric,replica_std";
/// numbers are written with 17 significant digits.
std::string format_curve(const std::vector<CurveRow>& rows);
std::vector<CurveRow> parse_curve(const std::string& text);

}  // namespace steergap
