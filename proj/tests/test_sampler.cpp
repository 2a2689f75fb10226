#include <cmath>

#include "doctest.h"
#include "slerho/driving.hpp"
#include "slerho/sampler.hpp"

using namespace slerho;

TEST_CASE("Wilson interval") {
  // closed form for 5 of 20 at z = 1.96
  const auto p = wilson(5, 20, 1.96);
  const double z2 = 1.96 * 1.96, n = 20, ph = 0.25;
  const double c = (ph + z2 / (2 * n)) / (1 + z2 / n);
  const double h = 1.96 * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  CHECK(p.p == doctest::Approx(0.25));
  CHECK(p.lo == doctest::Approx(c - h).epsilon(1e-12));
  CHECK(p.hi == doctest::Approx(c + h).epsilon(1e-12));
  const auto zero = wilson(0, 50);
  CHECK(zero.lo == doctest::Approx(0.0));
  CHECK(zero.hi > 0);
}

TEST_CASE("exponents and proposal") {
  CHECK(hitting_exponent(1, 1) == doctest::Approx(5.0));
  CHECK(hitting_exponent(4, 0) == doctest::Approx(0.0));
  CHECK(dual_proposal_rho(1, 1) == doctest::Approx(-4.0));
  CHECK(loglog_slope({0.1, 0.01, 0.001}, {1e-2, 1e-5, 1e-8}) == doctest::Approx(3.0));
}

TEST_CASE("splitmix64 reference values") {
  // first outputs of the reference generator seeded with 0
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("zero temperature reproduces the closed form") {
  SimulationConfig cfg;
  cfg.kappa = 0;
  cfg.fp = ForcePoint::boundary(1, 2);
  cfg.T = 1;
  cfg.n_paths = 2;
  cfg.dt_max = 1e-4;
  const auto sim = simulate_drive(cfg);
  for (const auto& p : sim.stats.paths) CHECK(p.final_value == doctest::Approx(-1.0).epsilon(1e-3));

  cfg.fp = ForcePoint::radial(kPi / 2, 2);
  const auto r = simulate_drive(cfg);
  CHECK(r.stats.paths[0].final_value == doctest::Approx(make_radial_sle0(2, kPi / 2)(1)).epsilon(1e-3));
}

TEST_CASE("driftless chordal variance") {
  SimulationConfig cfg;
  cfg.kappa = 1;
  cfg.fp = ForcePoint::boundary(1, 0);
  cfg.T = 1;
  cfg.dt_max = 1e-2;
  cfg.n_paths = 10000;
  cfg.seed = 7;
  const auto sim = simulate_drive(cfg);
  // var of a sample variance of 1e4 normals: sd ~ sqrt(2 / 1e4)
  CHECK(std::abs(sim.stats.var_final - 1.0) < 4 * std::sqrt(2.0 / 1e4));
  CHECK(std::abs(sim.stats.mean_final) < 4e-2);
}

TEST_CASE("determinism") {
  SimulationConfig cfg;
  cfg.kappa = 1;
  cfg.fp = ForcePoint::radial(kPi, 1);
  cfg.n_paths = 200;
  cfg.seed = 42;
  cfg.eps_stop = 0.1;
  const auto a = simulate_drive(cfg), b = simulate_drive(cfg);
  REQUIRE(a.stats.paths.size() == b.stats.paths.size());
  for (std::size_t i = 0; i < a.stats.paths.size(); ++i) {
    CHECK(a.stats.paths[i].final_value == b.stats.paths[i].final_value);
    CHECK(a.stats.paths[i].steps == b.stats.paths[i].steps);
  }
  cfg.seed = 43;
  CHECK(simulate_drive(cfg).stats.paths[0].final_value != a.stats.paths[0].final_value);
}

TEST_CASE("hitting probabilities decay with the predicted exponent") {
  SimulationConfig cfg;
  cfg.kappa = 1;
  cfg.fp = ForcePoint::radial(kPi, 1);
  cfg.T = 1;
  cfg.n_paths = 4000;
  cfg.seed = 5;
  const std::vector<double> levels{0.2, 0.1, 0.05};
  const auto est = hitting_probabilities(cfg, levels, dual_proposal_rho(1, 1));
  REQUIRE(est.size() == 3);
  std::vector<double> p;
  for (const auto& e : est) {
    CHECK(e.p > 0);
    CHECK(e.lo <= e.p);
    CHECK(e.p <= e.hi);
    p.push_back(e.p);
  }
  CHECK(p[1] < p[0]);
  CHECK(p[2] < p[1]);
  CHECK(loglog_slope(levels, p) >= hitting_exponent(1, 1) - 0.5);
}

TEST_CASE("tube probabilities") {
  SimulationConfig cfg;
  cfg.kappa = 0.5;
  cfg.fp = ForcePoint::boundary(1, 1);
  cfg.n_paths = 500;
  cfg.seed = 9;
  const auto center = make_chordal_sle0(1, 1);
  CHECK(tube_probability(cfg, center, 100).p == doctest::Approx(1.0));
  const auto narrow = tube_probability(cfg, center, 0.3);
  CHECK(narrow.p < 1);
  CHECK(narrow.n == 500);
}
