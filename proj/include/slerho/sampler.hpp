#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "slerho/driving.hpp"

namespace slerho {

struct SimulationConfig {
  double kappa = 1;
  ForcePoint fp = ForcePoint::radial(kPi, 0);
  double T = 1;
  double dt_max = 1e-3;
  /// Stop a path once the gap drops below eps_stop (0: run to T, or until
  /// the gap falls below 1e-9 of its initial value).
  double eps_stop = 0;
  std::uint64_t seed = 1;
  std::size_t n_paths = 1000;
  /// Keep every path as a sampled driving function (memory heavy).
  bool keep_paths = false;
  std::size_t max_steps = 50'000'000;
};

/// Binomial proportion with a 95% Wilson interval.
struct Proportion {
  std::size_t hits = 0, n = 0;
  double p = 0, lo = 0, hi = 0;
};
Proportion wilson(std::size_t hits, std::size_t n, double z = 1.959963984540054);

enum class PathStop { ReachedT, HitEps, NumericalBlowup, MaxSteps };
std::string to_string(PathStop s);

struct PathRecord {
  double final_value = 0;  ///< driving value at the stop time
  double final_time = 0;
  double min_gap = 0;
  bool hit = false;        ///< gap < eps_stop before T
  double hit_time = 0;
  std::size_t steps = 0;
  PathStop stop = PathStop::ReachedT;
};

struct PathStats {
  std::vector<PathRecord> paths;
  Proportion hit;
  double mean_final = 0, var_final = 0;
};

struct Simulation {
  PathStats stats;
  std::vector<DrivingFunction> drives;  ///< only with keep_paths
};

/// Euler-Maruyama for the SLE_kappa(rho) driving process with the force
/// point co-integrated; step min(dt_max, 0.01 gap^2 / max(|rho|, 1),
/// 0.01 gap^2 / kappa). Each path draws from its own generator seeded by
/// splitmix64(seed, index), so results do not depend on the thread count.
Simulation simulate_drive(const SimulationConfig& cfg);

/// Fraction of paths with sup_{[0,T]} |W - center| < radius.
Proportion tube_probability(const SimulationConfig& cfg, const DrivingFunction& center,
                            double radius);

/// Importance-sampled P[gap < eps before T] for several levels. Paths follow
/// the proposal weight `proposal_rho` and are reweighted by the discrete
/// likelihood ratio of the Euler transitions, recorded at the first hit of
/// each level.
struct LevelEstimate {
  double eps = 0;
  double p = 0;
  double se = 0;    ///< standard error of the weighted mean
  double lo = 0, hi = 0;
  std::size_t hits = 0;  ///< proposal paths reaching the level
};
std::vector<LevelEstimate> hitting_probabilities(const SimulationConfig& cfg,
                                                 std::vector<double> levels,
                                                 double proposal_rho);

/// The proposal kappa - 4 - rho maps the Bessel dimension d of the gap to
/// 4 - d, so the gap reaches 0.
inline double dual_proposal_rho(double kappa, double rho) { return kappa - 4 - rho; }

/// Exponent of the hitting bound: 2 (rho + 2) / kappa - 1.
inline double hitting_exponent(double kappa, double rho) { return 2 * (rho + 2) / kappa - 1; }

/// Least-squares slope of log p against log eps.
double loglog_slope(const std::vector<double>& eps, const std::vector<double>& p);

/// splitmix64 step, used for per-path seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace slerho
