#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "steergap/capacity.hpp"
#include "steergap/measurement.hpp"
#include "steergap/pauli.hpp"
#include "steergap/state.hpp"

namespace steergap {

/// pvm2: two-outcome projective measurements, Z in C^2.
/// povm4: rank-1 four-outcome POVMs, Z in C^4.
enum class Mode { Pvm2, Povm4 };

int outcome_count(Mode mode);
std::string to_string(Mode mode);
Mode parse_mode(const std::string& s);

struct AnnealConfig {
  double cool_factor = 0.95;
  double t_final = 1e-9;
  int steps_per_temp_multiplier = 100;
  /// 0 selects the mode default: 5 for pvm2, 20 for povm4.
  int dof = 0;
  int replicas = 32;
  std::uint64_t seed = 20170101;
  /// T0 is estimated from init_temp_multiplier * dof random states.
  int init_temp_multiplier = 1000;
  /// Worker threads for replicas; 0 uses std::thread::hardware_concurrency.
  int threads = 0;
  /// povm4 only: also score the zero-padded embedding (Z_1, Z_2, 0, 0),
  /// (P, P_perp, 0, 0) of a pvm2 run as a candidate. PVMs are rank-1 4-POVMs,
  /// so this never raises the gap. check_direction uses it the same way.
  bool pvm_warm_start = true;

  int effective_dof(Mode mode) const;
  bool operator==(const AnnealConfig&) const = default;
  /// Throws ValidationError unless 0 < f < 1, t_final > 0, replicas >= 1, ...
  void validate() const;
};

/// Seed of replica `index` derived from the master seed with a splitmix64
/// finalizer over (master + (index + 1) * golden-ratio increment).
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index);

/// The constrained parameterization Z = X R of C^n for n in {2, 4}. X is 4xn
/// with its last column fixed at zero and squared Frobenius norm 2; R is a
/// fixed orthogonal matrix whose columns mix X so that the parts of Z sum to
/// zero and have unit total Hilbert-Schmidt norm.
class ZParam {
 public:
  using XMatrix = Eigen::Matrix<double, 4, Eigen::Dynamic>;

  /// Throws ValidationError on a wrong shape, a nonzero last column or
  /// ||X||_F^2 != 2 (within 1e-12).
  static ZParam from_x(const XMatrix& x);
  static ZParam random(int n, std::mt19937_64& rng);

  static const Eigen::MatrixXd& mixing(int n);

  int size() const { return static_cast<int>(x_.cols()); }
  const XMatrix& x() const { return x_; }
  const CompositeCoords& z() const { return z_; }
  Direction direction() const;

  /// Rotates the pair (X(r1,c1), X(r2,c2)) by `angle`. Both columns must be
  /// free (not the last one) and the entries distinct.
  void rotate(int r1, int c1, int r2, int c2, double angle);
  /// Removes rounding drift from the norm constraint.
  void renormalize();

 private:
  explicit ZParam(const XMatrix& x);
  void refresh() { z_.noalias() = x_ * mixing(size()); }
  XMatrix x_;
  CompositeCoords z_;
};

/// F(Z, E) = capacity_support(u, Z) - measurement_support(rho, Z, E).
double objective(const TwoQubitState& rho, const LhsEnsemble& u, const Direction& z, const RankOnePovm& e);

/// Same with E given by four directions; +infinity when the alpha solve is
/// singular or leaves [0, 1].
double objective(const TwoQubitState& rho, const LhsEnsemble& u, const Direction& z,
                 std::span<const BlochPoint> dirs);

struct AnnealOutcome {
  double energy;
  Direction z;
  RankOnePovm e;
  double initial_energy;
  double initial_temperature;
  /// Best-so-far energy recorded at the end of every temperature level.
  std::vector<double> trace;
};

/// One full exponential cooling run of Metropolis dynamics over (Z, E).
AnnealOutcome anneal_once(const TwoQubitState& rho, const LhsEnsemble& u, Mode mode, const AnnealConfig& cfg,
                          std::mt19937_64& rng);

struct GapResult {
  double gap;
  Direction best_z;
  RankOnePovm best_e;
  /// Set in pvm2 mode.
  std::optional<Pvm> best_pvm;
  std::vector<double> replica_energies;
  /// Energy of the embedded pvm2 candidate (povm4 with pvm_warm_start).
  std::optional<double> pvm_embedding_energy;
  Mode mode;
  AnnealConfig config;
  double wall_time_s;

  /// Best energy among the annealed replicas alone.
  double annealed_gap() const;
  double replica_mean() const;
  double replica_std() const;
};

/// Runs cfg.replicas independent cooling runs (in parallel) and returns the
/// minimum energy found. Results do not depend on the thread count.
/// Throws ValidationError for an invalid config.
GapResult gap(const TwoQubitState& rho, const LhsEnsemble& u, Mode mode, const AnnealConfig& cfg);

/// 1/4 - p/2, the exact PVM gap of the Werner state with the uniform ensemble.
double gap_pvm_analytic(double p);

/// Margin of the steering inequality in a single fixed direction: capacity
/// support minus the maximal measurement support. pvm2 (two-part z) uses the
/// closed form; povm4 (four-part z) anneals over E only with z held fixed
/// and, with pvm_warm_start, also scores every PVM on a pair of components.
double check_direction(const TwoQubitState& rho, const LhsEnsemble& u, const Direction& z, Mode mode,
                       const AnnealConfig& cfg = {});

}  // namespace steergap
