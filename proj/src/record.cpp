#include "steergap/record.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "steergap/errors.hpp"

#ifndef STEERGAP_VERSION
#define STEERGAP_VERSION "0.0.0"
#endif

namespace steergap {

using nlohmann::json;

std::string library_version() { return STEERGAP_VERSION; }

StateSpec state_from_spec(const std::string& spec) {
  constexpr std::string_view prefix = "werner:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string arg = spec.substr(prefix.size());
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw ValidationError("bad Werner parameter: " + arg);
    }
    if (used != arg.size()) throw ValidationError("bad Werner parameter: " + arg);
    return StateSpec{werner(p), p, spec};
  }
  return StateSpec{load_state(spec), std::nullopt, spec};
}

LhsEnsemble ensemble_from_spec(const std::string& spec, const std::string& quadrature_spec) {
  if (spec == "uniform") return LhsEnsemble::uniform(quadrature_from_spec(quadrature_spec));
  constexpr std::string_view prefix = "discrete:";
  if (spec.rfind(prefix, 0) == 0) return LhsEnsemble::load_discrete(spec.substr(prefix.size()));
  throw ValidationError("LHS ensemble must be 'uniform' or 'discrete:<path>', got '" + spec + "'");
}

Direction load_direction(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open direction file: " + path.string());
  std::vector<HermOp> parts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double x0, x1, x2, x3;
    std::string extra;
    if (!(ls >> x0 >> x1 >> x2 >> x3) || (ls >> extra)) {
      throw FormatError("malformed direction row " + std::to_string(lineno) + ": expected four reals");
    }
    parts.emplace_back(x0, x1, x2, x3);
  }
  if (parts.size() < 2) throw FormatError("direction file needs at least two rows");
  return normalize_direction(parts);
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

RunRecord make_record(const GapResult& result, const StateSpec& state, const LhsEnsemble& u,
                      const std::string& quadrature_id, bool reproducible) {
  RunRecord r;
  r.version = library_version();
  r.timestamp = reproducible ? "1970-01-01T00:00:00Z" : utc_now();
  r.state = state.id;
  r.p = state.werner_p;
  r.mode = to_string(result.mode);
  r.lhs = u.id();
  r.quadrature = quadrature_id;
  r.config = result.config;
  r.gap = result.gap;
  r.gap_annealed = result.annealed_gap();
  if (state.werner_p && result.mode == Mode::Pvm2) r.gap_pvm_analytic = gap_pvm_analytic(*state.werner_p);
  for (const auto& z : result.best_z.parts()) r.best_z.push_back({z[0], z[1], z[2], z[3]});
  for (std::size_t i = 0; i < result.best_e.size(); ++i) {
    const auto& d = result.best_e.dirs()[i];
    r.best_e_dirs.push_back({d[0], d[1], d[2]});
    r.best_e_alphas.push_back(result.best_e.alphas()[i]);
  }
  r.replica_energies = result.replica_energies;
  r.replica_std = result.replica_std();
  r.wall_time_s = reproducible ? 0.0 : result.wall_time_s;
  return r;
}

json to_json(const RunRecord& r) {
  json cfg = {{"cool_factor", r.config.cool_factor},
              {"t_final", r.config.t_final},
              {"steps_per_temp_multiplier", r.config.steps_per_temp_multiplier},
              {"dof", r.config.dof},
              {"replicas", r.config.replicas},
              {"seed", r.config.seed},
              {"init_temp_multiplier", r.config.init_temp_multiplier},
              {"threads", r.config.threads},
              {"pvm_warm_start", r.config.pvm_warm_start}};
  json j = {{"version", r.version},
            {"timestamp", r.timestamp},
            {"state", r.state},
            {"p", r.p ? json(*r.p) : json(nullptr)},
            {"mode", r.mode},
            {"lhs", r.lhs},
            {"quadrature", r.quadrature},
            {"config", cfg},
            {"gap", r.gap},
            {"gap_annealed", r.gap_annealed},
            {"gap_pvm_analytic", r.gap_pvm_analytic ? json(*r.gap_pvm_analytic) : json(nullptr)},
            {"best_z", r.best_z},
            {"best_e", {{"dirs", r.best_e_dirs}, {"alphas", r.best_e_alphas}}},
            {"replica_energies", r.replica_energies},
            {"replica_std", r.replica_std},
            {"wall_time_s", r.wall_time_s}};
  return j;
}

RunRecord record_from_json(const json& j) {
  try {
    RunRecord r;
    r.version = j.at("version").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.state = j.at("state").get<std::string>();
    if (!j.at("p").is_null()) r.p = j.at("p").get<double>();
    r.mode = j.at("mode").get<std::string>();
    r.lhs = j.at("lhs").get<std::string>();
    r.quadrature = j.at("quadrature").get<std::string>();
    const auto& c = j.at("config");
    r.config.cool_factor = c.at("cool_factor").get<double>();
    r.config.t_final = c.at("t_final").get<double>();
    r.config.steps_per_temp_multiplier = c.at("steps_per_temp_multiplier").get<int>();
    r.config.dof = c.at("dof").get<int>();
    r.config.replicas = c.at("replicas").get<int>();
    r.config.seed = c.at("seed").get<std::uint64_t>();
    r.config.init_temp_multiplier = c.at("init_temp_multiplier").get<int>();
    r.config.threads = c.at("threads").get<int>();
    r.config.pvm_warm_start = c.at("pvm_warm_start").get<bool>();
    r.gap = j.at("gap").get<double>();
    r.gap_annealed = j.at("gap_annealed").get<double>();
    if (!j.at("gap_pvm_analytic").is_null()) r.gap_pvm_analytic = j.at("gap_pvm_analytic").get<double>();
    r.best_z = j.at("best_z").get<std::vector<std::array<double, 4>>>();
    r.best_e_dirs = j.at("best_e").at("dirs").get<std::vector<std::array<double, 3>>>();
    r.best_e_alphas = j.at("best_e").at("alphas").get<std::vector<double>>();
    r.replica_energies = j.at("replica_energies").get<std::vector<double>>();
    r.replica_std = j.at("replica_std").get<double>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed run record: ") + e.what());
  }
}

std::string format_curve(const std::vector<CurveRow>& rows) {
  std::ostringstream out;
  out << "p,gap_pvm_analytic,gap_numeric,replica_std\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.p << ',' << r.gap_pvm_analytic << ',' << r.gap_numeric << ',' << r.replica_std << '\n';
  }
  return out.str();
}

std::vector<CurveRow> parse_curve(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "p,gap_pvm_analytic,gap_numeric,replica_std") {
    throw FormatError("curve table has an unexpected header");
  }
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 4> v{};
    std::istringstream ls(line);
    std::string cell;
    int k = 0;
    while (std::getline(ls, cell, ',')) {
      if (k >= 4) throw FormatError("curve row has too many columns: " + line);
      try {
        std::size_t used = 0;
        v[static_cast<std::size_t>(k)] = std::stod(cell, &used);
        if (used != cell.size()) throw FormatError("bad number in curve row: " + line);
      } catch (const std::logic_error&) {
        throw FormatError("bad number in curve row: " + line);
      }
      ++k;
    }
    if (k != 4) throw FormatError("curve row has too few columns: " + line);
    rows.push_back({v[0], v[1], v[2], v[3]});
  }
  return rows;
}

}  // namespace steergap
