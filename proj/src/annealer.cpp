#include "steergap/annealer.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "steergap/errors.hpp"

namespace steergap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-8);
  return v.normalized();
}

// Rotation of v about coordinate axis `axis` by `angle`.
Eigen::Vector3d rotate_about(const Eigen::Vector3d& v, int axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const int a = (axis + 1) % 3, b = (axis + 2) % 3;
  Eigen::Vector3d out = v;
  out[a] = c * v[a] - s * v[b];
  out[b] = s * v[a] + c * v[b];
  return out;
}

std::vector<BlochPoint> to_points(const std::vector<Eigen::Vector3d>& dirs) {
  std::vector<BlochPoint> pts;
  pts.reserve(dirs.size());
  for (const auto& d : dirs) pts.push_back(BlochPoint::normalized(d));
  return pts;
}

// The Metropolis walker: current (Z, E), cached energy terms, and a scratch
// proposal. E is an axis in pvm2 mode and four directions in povm4 mode.
class Walker {
 public:
  Walker(const TwoQubitState& rho, const LhsEnsemble& u, Mode mode)
      : half_theta_(0.5 * rho.pauli_tensor()), kernel_(u), mode_(mode) {}

  struct State {
    ZParam z;
    std::vector<Eigen::Vector3d> dirs;
    Eigen::Vector4d alphas = Eigen::Vector4d::Zero();
    bool feasible = true;
    double capacity = 0.0;
    double measurement = 0.0;
    double energy() const { return feasible ? capacity - measurement : kInf; }
  };

  State random_state(std::mt19937_64& rng) {
    State s{ZParam::random(outcome_count(mode_), rng), {}, Eigen::Vector4d::Zero(), true, 0.0, 0.0};
    const int ndirs = mode_ == Mode::Pvm2 ? 1 : 4;
    for (int i = 0; i < ndirs; ++i) s.dirs.push_back(random_unit(rng));
    update_alphas(s);
    update_capacity(s);
    update_measurement(s);
    return s;
  }

  State fixed_z_state(const Direction& z, std::mt19937_64& rng) {
    if (static_cast<int>(z.size()) != outcome_count(mode_)) {
      throw ValidationError("direction size does not match the measurement mode");
    }
    State s = random_state(rng);
    fixed_z_ = to_columns(z.parts());
    update_capacity(s);
    update_measurement(s);
    return s;
  }

  void update_alphas(State& s) const {
    if (mode_ == Mode::Pvm2) return;
    Eigen::Matrix<double, 3, 4> cols;
    for (int i = 0; i < 4; ++i) cols.col(i) = s.dirs[static_cast<std::size_t>(i)];
    const AlphaSolve sol = solve_alphas(cols);
    s.feasible = sol.ok();
    s.alphas = sol.alphas;
  }

  const CompositeCoords& z_of(const State& s) const { return fixed_z_ ? *fixed_z_ : s.z.z(); }

  void update_capacity(State& s) { s.capacity = kernel_(z_of(s)); }

  void update_measurement(State& s) {
    if (!s.feasible) return;
    dual_.noalias() = half_theta_ * z_of(s);
    // <T(Z_i), E_i> with E_i = alpha_i (1, n_i) and <a, b> = a.b / 2.
    if (mode_ == Mode::Pvm2) {
      const Eigen::Vector3d& a = s.dirs[0];
      s.measurement = 0.5 * (dual_(0, 0) + dual_.col(0).tail<3>().dot(a) + dual_(0, 1) - dual_.col(1).tail<3>().dot(a));
    } else {
      double acc = 0.0;
      for (int i = 0; i < 4; ++i) {
        acc += s.alphas[i] * (dual_(0, i) + dual_.col(i).tail<3>().dot(s.dirs[static_cast<std::size_t>(i)]));
      }
      s.measurement = 0.5 * acc;
    }
  }

  // Proposes a move from `from` into `to`; returns the proposal energy.
  double propose(const State& from, State& to, double temperature, bool allow_z, std::mt19937_64& rng) {
    to.z = from.z;
    to.dirs = from.dirs;
    to.alphas = from.alphas;
    to.feasible = from.feasible;
    to.capacity = from.capacity;
    to.measurement = from.measurement;

    const double sigma = 2.0 * std::numbers::pi * std::sqrt(temperature);
    std::normal_distribution<double> angle_dist(0.0, sigma);
    std::bernoulli_distribution coin(0.5);

    if (allow_z && coin(rng)) {
      const int free_cols = to.z.size() - 1;
      const int slots = 4 * free_cols;
      std::uniform_int_distribution<int> pick(0, slots - 1);
      const int first = pick(rng);
      int second = pick(rng);
      while (second == first) second = pick(rng);
      to.z.rotate(first % 4, first / 4, second % 4, second / 4, angle_dist(rng));
      update_capacity(to);
      update_measurement(to);
    } else {
      std::uniform_int_distribution<int> pick_dir(0, static_cast<int>(to.dirs.size()) - 1);
      std::uniform_int_distribution<int> pick_axis(0, 2);
      const auto i = static_cast<std::size_t>(pick_dir(rng));
      to.dirs[i] = rotate_about(to.dirs[i], pick_axis(rng), angle_dist(rng));
      update_alphas(to);
      update_measurement(to);
    }
    return to.energy();
  }

  RankOnePovm povm_of(const State& s) const {
    if (mode_ == Mode::Pvm2) return Pvm(BlochPoint::normalized(s.dirs[0])).as_povm();
    const auto pts = to_points(s.dirs);
    std::vector<double> a(s.alphas.data(), s.alphas.data() + 4);
    return RankOnePovm(pts, a);
  }

  Direction direction_of(const State& s) const {
    if (!fixed_z_) return s.z.direction();
    std::vector<HermOp> parts;
    for (Eigen::Index i = 0; i < fixed_z_->cols(); ++i) parts.emplace_back(fixed_z_->col(i));
    return Direction::from_normalized(std::move(parts));
  }

  bool z_fixed() const { return fixed_z_.has_value(); }

 private:
  Eigen::Matrix4d half_theta_;
  CapacityKernel kernel_;
  Mode mode_;
  std::optional<CompositeCoords> fixed_z_;
  CompositeCoords dual_;
};

AnnealOutcome run_schedule(Walker& walker, Walker::State current, Mode mode, const AnnealConfig& cfg,
                           std::mt19937_64& rng) {
  const int dof = cfg.effective_dof(mode);
  const bool allow_z = !walker.z_fixed();

  // Initial temperature: spread of the energy over random feasible states.
  double lo = kInf, hi = -kInf;
  const long samples = static_cast<long>(cfg.init_temp_multiplier) * dof;
  for (long k = 0; k < samples; ++k) {
    Walker::State s = allow_z ? walker.random_state(rng) : current;
    if (!allow_z) {
      for (auto& d : s.dirs) d = random_unit(rng);
      walker.update_alphas(s);
      walker.update_measurement(s);
    }
    const double e = s.energy();
    if (!std::isfinite(e)) continue;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  double temperature = (hi > lo) ? hi - lo : 1.0;
  const double t0 = temperature;

  // Start from a feasible configuration.
  for (int attempt = 0; attempt < 10000 && !std::isfinite(current.energy()); ++attempt) {
    for (auto& d : current.dirs) d = random_unit(rng);
    walker.update_alphas(current);
    walker.update_measurement(current);
  }
  if (!std::isfinite(current.energy())) {
    // Regular tetrahedron: always feasible with alpha_i = 1/2.
    const double r = 1.0 / std::sqrt(3.0);
    current.dirs = {Eigen::Vector3d(r, r, r), Eigen::Vector3d(r, -r, -r), Eigen::Vector3d(-r, r, -r),
                    Eigen::Vector3d(-r, -r, r)};
    walker.update_alphas(current);
    walker.update_measurement(current);
  }

  Walker::State best = current;
  Walker::State proposal = current;
  double energy = current.energy();
  double best_energy = energy;
  const double initial_energy = energy;
  const long steps = static_cast<long>(cfg.steps_per_temp_multiplier) * dof;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> trace;

  while (temperature > cfg.t_final) {
    for (long step = 0; step < steps; ++step) {
      const double candidate = walker.propose(current, proposal, temperature, allow_z, rng);
      if (!std::isfinite(candidate)) continue;
      const double delta = candidate - energy;
      if (delta <= 0.0 || unif(rng) < std::exp(-delta / temperature)) {
        std::swap(current, proposal);
        energy = candidate;
        if (energy < best_energy) {
          best_energy = energy;
          best = current;
        }
      }
    }
    if (allow_z) {
      current.z.renormalize();
      walker.update_capacity(current);
      walker.update_measurement(current);
      energy = current.energy();
    }
    trace.push_back(best_energy);
    temperature *= cfg.cool_factor;
  }

  return AnnealOutcome{best_energy, walker.direction_of(best), walker.povm_of(best), initial_energy, t0,
                       std::move(trace)};
}

}  // namespace

int outcome_count(Mode mode) { return mode == Mode::Pvm2 ? 2 : 4; }

std::string to_string(Mode mode) { return mode == Mode::Pvm2 ? "pvm2" : "povm4"; }

Mode parse_mode(const std::string& s) {
  if (s == "pvm2") return Mode::Pvm2;
  if (s == "povm4") return Mode::Povm4;
  throw ValidationError("unknown mode '" + s + "', expected pvm2 or povm4");
}

int AnnealConfig::effective_dof(Mode mode) const {
  if (dof > 0) return dof;
  return mode == Mode::Pvm2 ? 5 : 20;
}

void AnnealConfig::validate() const {
  if (!(cool_factor > 0.0 && cool_factor < 1.0)) throw ValidationError("cooling factor must lie in (0, 1)");
  if (!(t_final > 0.0)) throw ValidationError("final temperature must be positive");
  if (replicas < 1) throw ValidationError("need at least one replica");
  if (steps_per_temp_multiplier < 1) throw ValidationError("steps per temperature multiplier must be >= 1");
  if (init_temp_multiplier < 1) throw ValidationError("initial temperature sample multiplier must be >= 1");
  if (dof < 0 || threads < 0) throw ValidationError("dof and threads must be non-negative");
}

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

const Eigen::MatrixXd& ZParam::mixing(int n) {
  static const Eigen::MatrixXd r2 = [] {
    Eigen::MatrixXd r(2, 2);
    r << 1, -1, 1, 1;
    return Eigen::MatrixXd(r / std::sqrt(2.0));
  }();
  static const Eigen::MatrixXd r4 = [] {
    Eigen::MatrixXd r(4, 4);
    r << 1, -1, -1, 1,
        -1, -1, 1, 1,
        -1, 1, -1, 1,
        1, 1, 1, 1;
    return Eigen::MatrixXd(0.5 * r);
  }();
  if (n == 2) return r2;
  if (n == 4) return r4;
  throw ValidationError("Z parameterization supports n = 2 or n = 4");
}

ZParam::ZParam(const XMatrix& x) : x_(x), z_(4, x.cols()) { refresh(); }

ZParam ZParam::from_x(const XMatrix& x) {
  const auto n = x.cols();
  if (n != 2 && n != 4) throw ValidationError("Z parameterization supports n = 2 or n = 4");
  if (x.col(n - 1).cwiseAbs().maxCoeff() != 0.0) throw ValidationError("last column of X must be zero");
  if (std::abs(x.squaredNorm() - 2.0) > 1e-12) throw ValidationError("X must have squared Frobenius norm 2");
  return ZParam(x);
}

ZParam ZParam::random(int n, std::mt19937_64& rng) {
  mixing(n);
  std::normal_distribution<double> g(0.0, 1.0);
  XMatrix x = XMatrix::Zero(4, n);
  for (int c = 0; c < n - 1; ++c) {
    for (int r = 0; r < 4; ++r) x(r, c) = g(rng);
  }
  x *= std::sqrt(2.0) / x.norm();
  return ZParam(x);
}

Direction ZParam::direction() const {
  std::vector<HermOp> parts;
  parts.reserve(static_cast<std::size_t>(z_.cols()));
  for (Eigen::Index i = 0; i < z_.cols(); ++i) parts.emplace_back(z_.col(i));
  return Direction::from_normalized(std::move(parts));
}

void ZParam::rotate(int r1, int c1, int r2, int c2, double angle) {
  const int last = size() - 1;
  if (c1 >= last || c2 >= last || (r1 == r2 && c1 == c2)) {
    throw ValidationError("rotation must act on two distinct free entries of X");
  }
  const double c = std::cos(angle), s = std::sin(angle);
  const double a = x_(r1, c1), b = x_(r2, c2);
  x_(r1, c1) = c * a - s * b;
  x_(r2, c2) = s * a + c * b;
  refresh();
}

void ZParam::renormalize() {
  x_ *= std::sqrt(2.0) / x_.norm();
  refresh();
}

double objective(const TwoQubitState& rho, const LhsEnsemble& u, const Direction& z, const RankOnePovm& e) {
  return capacity_support(u, z) - measurement_support(rho, z, e);
}

double objective(const TwoQubitState& rho, const LhsEnsemble& u, const Direction& z,
                 std::span<const BlochPoint> dirs) {
  const AlphaSolve sol = solve_alphas(dirs);
  if (!sol.ok()) return kInf;
  std::vector<BlochPoint> d(dirs.begin(), dirs.end());
  return objective(rho, u, z, RankOnePovm(std::move(d), {sol.alphas[0], sol.alphas[1], sol.alphas[2], sol.alphas[3]}));
}

AnnealOutcome anneal_once(const TwoQubitState& rho, const LhsEnsemble& u, Mode mode, const AnnealConfig& cfg,
                          std::mt19937_64& rng) {
  cfg.validate();
  Walker walker(rho, u, mode);
  Walker::State start = walker.random_state(rng);
  return run_schedule(walker, std::move(start), mode, cfg, rng);
}

double GapResult::replica_mean() const {
  return std::accumulate(replica_energies.begin(), replica_energies.end(), 0.0) /
         static_cast<double>(replica_energies.size());
}

double GapResult::replica_std() const {
  const double mean = replica_mean();
  double acc = 0.0;
  for (double e : replica_energies) acc += (e - mean) * (e - mean);
  return std::sqrt(acc / static_cast<double>(replica_energies.size()));
}

namespace {

std::vector<AnnealOutcome> run_replicas(const TwoQubitState& rho, const LhsEnsemble& u, Mode mode,
                                        const AnnealConfig& cfg) {
  const auto m = static_cast<std::size_t>(cfg.replicas);
  std::vector<std::optional<AnnealOutcome>> outcomes(m);
  std::vector<std::exception_ptr> errors(m);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < m; k = next++) {
      try {
        std::mt19937_64 rng(replica_seed(cfg.seed, k));
        outcomes[k] = anneal_once(rho, u, mode, cfg, rng);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(m));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<AnnealOutcome> out;
  out.reserve(m);
  for (auto& o : outcomes) out.push_back(std::move(*o));
  return out;
}

// (Z_1, Z_2) -> (Z_1, Z_2, 0, 0) and {P(n), P(-n)} -> {P(n), P(-n), 0, 0}. The
// two padding directions only need to keep the alpha solve nonsingular.
AnnealOutcome embed_pvm(const TwoQubitState& rho, const LhsEnsemble& u, const Direction& z2, const BlochPoint& axis) {
  std::vector<HermOp> parts{z2[0], z2[1], HermOp::zero(), HermOp::zero()};
  Direction z4 = Direction::from_normalized(std::move(parts));
  const Eigen::Vector3d n = axis.vec();
  const Eigen::Vector3d helper = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d m = n.cross(helper).normalized();
  const Eigen::Vector3d k = n.cross(m).normalized();
  const std::vector<BlochPoint> dirs{axis, axis.antipode(), BlochPoint::normalized(m), BlochPoint::normalized(k)};
  const AlphaSolve sol = solve_alphas(dirs);
  RankOnePovm e(dirs, {sol.alphas[0], sol.alphas[1], sol.alphas[2], sol.alphas[3]});
  const double energy = objective(rho, u, z4, e);
  return AnnealOutcome{energy, std::move(z4), std::move(e), energy, 0.0, {}};
}

}  // namespace

GapResult gap(const TwoQubitState& rho, const LhsEnsemble& u, Mode mode, const AnnealConfig& cfg) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  std::vector<AnnealOutcome> outcomes = run_replicas(rho, u, mode, cfg);

  std::size_t best = 0;
  std::vector<double> energies;
  energies.reserve(outcomes.size());
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    energies.push_back(outcomes[k].energy);
    if (outcomes[k].energy < outcomes[best].energy) best = k;
  }
  const AnnealOutcome* win = &outcomes[best];

  std::optional<double> embedded_energy;
  std::optional<AnnealOutcome> embedded;
  if (mode == Mode::Povm4 && cfg.pvm_warm_start) {
    AnnealConfig sub = cfg;
    sub.dof = 0;
    sub.seed = replica_seed(cfg.seed, ~std::uint64_t{0});
    const GapResult pvm = gap(rho, u, Mode::Pvm2, sub);
    embedded = embed_pvm(rho, u, pvm.best_z, pvm.best_pvm->axis());
    embedded_energy = embedded->energy;
    if (embedded->energy < win->energy) win = &*embedded;
  }

  std::optional<Pvm> pvm;
  if (mode == Mode::Pvm2) pvm = Pvm(win->e.dirs()[0]);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return GapResult{win->energy, win->z, win->e, pvm, std::move(energies), embedded_energy, mode, cfg, wall};
}

double GapResult::annealed_gap() const {
  return *std::min_element(replica_energies.begin(), replica_energies.end());
}

double gap_pvm_analytic(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("Werner mixing p must lie in [0, 1]");
  return 0.25 - 0.5 * p;
}

double check_direction(const TwoQubitState& rho, const LhsEnsemble& u, const Direction& z, Mode mode,
                       const AnnealConfig& cfg) {
  if (static_cast<int>(z.size()) != outcome_count(mode)) {
    throw ValidationError("direction size does not match the measurement mode");
  }
  const double cap = capacity_support(u, z);
  if (mode == Mode::Pvm2) return cap - pvm_support_closed_form(rho, z).value;

  cfg.validate();
  double best = kInf;
  if (cfg.pvm_warm_start) {
    // A PVM on components (i, j) with zero weight elsewhere is a rank-1 4-POVM.
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        const std::array<HermOp, 2> pair{z[i], z[j]};
        best = std::min(best, cap - pvm_support_closed_form(rho, pair).value);
      }
    }
  }
  for (int k = 0; k < cfg.replicas; ++k) {
    std::mt19937_64 rng(replica_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    Walker walker(rho, u, mode);
    Walker::State start = walker.fixed_z_state(z, rng);
    best = std::min(best, run_schedule(walker, std::move(start), mode, cfg, rng).energy);
  }
  return best;
}

}  // namespace steergap
