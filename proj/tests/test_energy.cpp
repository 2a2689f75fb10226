#include <cmath>
#include <random>

#include "doctest.h"
#include "slerho/driving.hpp"
#include "slerho/energy.hpp"
#include "slerho/error.hpp"
#include "slerho/loewner.hpp"

using namespace slerho;

namespace {
DrivingFunction zero_drive() {
  return DrivingFunction::from_function(
      Setting::ChordalHalfPlane, [](double) { return 0.0; }, kInf, [](double) { return 0.0; }, "zero");
}

bool all_ok(const std::vector<Certificate>& cs) {
  for (const auto& c : cs)
    if (c.applicable && !c.ok) return false;
  return true;
}
}  // namespace

TEST_CASE("minimizers have zero energy") {
  for (double rho : {-1.5, 0.0, 2.0, 6.0}) {
    CHECK(std::abs(rho_energy_direct(make_chordal_sle0(rho, 1), ForcePoint::boundary(1, rho), 1)) < 1e-8);
    CHECK(std::abs(rho_energy_direct(make_chordal_sle0(rho, -2), ForcePoint::boundary(-2, rho), 1)) < 1e-8);
  }
  CHECK(std::abs(rho_energy_direct(make_radial_sle0(1, kPi), ForcePoint::radial(kPi, 1), 1)) < 1e-8);
  CHECK(std::abs(rho_energy_direct(make_radial_sle0(-1, 2), ForcePoint::radial(2, -1), 3)) < 1e-8);
}

TEST_CASE("zero driving with boundary force point") {
  // x_t - W_t = sqrt(1 + 4t): 1/2 int_0^1 4 / (1 + 4t) dt = ln(5) / 2
  const double oracle = 0.5 * std::log(5.0);
  CHECK(rho_energy_direct(zero_drive(), ForcePoint::boundary(1, 2), 1) ==
        doctest::Approx(oracle).epsilon(1e-6));
  const auto rep = rho_energy_integrated(zero_drive(), ForcePoint::boundary(1, 2), 1);
  CHECK(std::abs(rep.integrated - oracle) < 1e-3);
  CHECK(rep.discrepancy == doctest::Approx(std::abs(rep.direct - rep.integrated)));
  CHECK_FALSE(rep.infinite);
}

TEST_CASE("rho = 0 reduces to the Dirichlet energy of the driving") {
  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.3, 0.1}, {2.0, 5.0}, 0.2);
  const auto rep = rho_energy_integrated(f, ForcePoint::boundary(1, 0), 1);
  // 1/2 int (0.6 cos 2t + 0.5 cos 5t + 0.2)^2 by Simpson
  const int n = 2000;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / n;
    const double d = 0.6 * std::cos(2 * t) + 0.5 * std::cos(5 * t) + 0.2;
    s += (i == 0 || i == n ? 1 : i % 2 ? 4 : 2) * d * d;
  }
  const double oracle = 0.5 * s / (3 * n);
  CHECK(rep.direct == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(rep.integrated == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(rep.base_energy == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("spiral decomposition") {
  // zero energy and constant sin(theta): I^C = -2 log(|g'(z0)| y_T / y0)
  const cplx z0 = std::polar(1.0, 1.1);
  const auto f = make_chordal_sle0_spiral(z0);
  const auto tr = track_force_point(f, ForcePoint::interior(z0, -4), 0.2);
  const double lhs = cumulative_base_energy(tr).back();
  const double rhs = -2 * (tr.log_deriv.back() + std::log(tr.y(tr.size() - 1) / tr.y(0)));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
  CHECK(std::abs(cumulative_direct_energy(tr).back()) < 1e-8);
}

TEST_CASE("integrated formula matches the direct route") {
  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.2, -0.1}, {3.0, 6.0}, 0.1);
  for (const ForcePoint& fp : {ForcePoint::boundary(1.5, 1), ForcePoint::boundary(-1, -1.5),
                               ForcePoint::interior(cplx(0.3, 1.5), -6)}) {
    const auto rep = rho_energy_integrated(f, fp, 0.5);
    CHECK(rep.discrepancy < 1e-4 * (1 + rep.direct));
  }
  const auto r = make_sine_series(Setting::RadialDisk, {0.2}, {3.0});
  const auto rep = rho_energy_integrated(r, ForcePoint::radial(2, 1), 1);
  CHECK(rep.discrepancy < 1e-4 * (1 + rep.direct));
}

TEST_CASE("quadrature converges at first order or better") {
  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.4}, {4.0}, 0.3);
  const auto fp = ForcePoint::boundary(1, 2);
  EnergyOptions a, b;
  a.track.dt = 4e-3;
  b.track.dt = 2e-3;
  const double da = rho_energy_integrated(f, fp, 1, a).discrepancy;
  const double db = rho_energy_integrated(f, fp, 1, b).discrepancy;
  CHECK(db < 0.6 * da + 1e-12);
}

TEST_CASE("perturbing the minimizer raises the energy quadratically") {
  const auto base = make_chordal_sle0(1, 1);
  const auto fp = ForcePoint::boundary(1, 1);
  const auto energy = [&](double delta) {
    return rho_energy_direct(add(base, make_sine_series(Setting::ChordalHalfPlane, {delta}, {3.0})), fp, 1);
  };
  const double e1 = energy(0.02), e2 = energy(0.01);
  CHECK(e1 > 0);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("scale invariance") {
  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.3}, {3.0}, 0.1);
  const cplx z0(0.4, 1.2);
  const double e = rho_energy_direct(f, ForcePoint::interior(z0, -6), 0.5);
  for (double lambda : {0.5, 2.0, 10.0}) {
    EnergyOptions o;
    o.track.dt *= lambda * lambda;
    const double s = rho_energy_direct(f.rescaled(lambda), ForcePoint::interior(lambda * z0, -6),
                                       0.5 * lambda * lambda, o);
    CHECK(s == doctest::Approx(e).epsilon(1e-6));
  }
}

TEST_CASE("minimal energy through a point") {
  CHECK(min_energy_through_point(cplx(0, 1)) == doctest::Approx(0.0));
  CHECK(min_energy_through_point(std::polar(1.0, kPi / 4)) == doctest::Approx(4 * std::log(2.0)));
  CHECK(min_energy_through_point(std::polar(7.0, 0.6)) ==
        doctest::Approx(min_energy_through_point(std::polar(0.1, 0.6))));
}

TEST_CASE("additivity") {
  const auto fp = ForcePoint::boundary(1, 2);
  CHECK(energy_additivity_check(make_chordal_sle0(2, 1), fp, 1, 0.5) < 1e-8);
  CHECK(energy_additivity_check(zero_drive(), fp, 1, 0.5) < 1e-6);
  // the parts of the zero-driving energy: ln(3)/2 and ln(5/3)/2
  CHECK(rho_energy_direct(zero_drive(), fp, 0.5) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-6));
  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.3, 0.2}, {2.0, 7.0}, -0.2);
  CHECK(energy_additivity_check(f, ForcePoint::interior(cplx(0.2, 1.4), -5), 0.4, 0.17) < 1e-6);
}

TEST_CASE("welding bound") {
  for (double rho : {-1.5, 0.0, 1.0, 4.0}) {
    const double x0 = 1;
    const auto tr = track_force_point(make_chordal_sle0(rho, x0), ForcePoint::boundary(x0, rho), 2,
                                      welding_track_options(rho, x0));
    const auto w = welding_lower_bound(tr, rho, x0);
    CHECK(w.r_0 == doctest::Approx(2 / (4 + rho)).epsilon(1e-12));
    CHECK(w.r_T == doctest::Approx(w.r_0).epsilon(1e-8));
    CHECK(std::abs(w.bound) < 1e-8);
  }
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 10; ++i) {
    const auto f = make_sine_series(Setting::ChordalHalfPlane, {u(g), u(g)}, {2 + 4 * (u(g) + 0.5), 7.0}, u(g));
    const auto tr = track_force_point(f, ForcePoint::boundary(1, 1), 0.5, welding_track_options(1, 1));
    const auto w = welding_lower_bound(tr, 1, 1);
    CHECK(w.bound <= cumulative_direct_energy(tr).back() + 1e-9);
  }
}

TEST_CASE("certificates") {
  const auto c = bound_certificates(make_chordal_sle0(1, 1), ForcePoint::boundary(1, 1), 1);
  CHECK(all_ok(c));
  for (const auto& x : c)
    if (x.name == "boundary-sandwich") CHECK((x.lower <= 1e-9 && x.upper >= -1e-9));

  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.3, 0.1}, {2.0, 5.0});
  CHECK(all_ok(bound_certificates(f, ForcePoint::interior(cplx(0.2, 1.1), -6), 0.3)));
  CHECK(all_ok(bound_certificates(f, ForcePoint::boundary(1, 2), 0.5)));
  CHECK(all_ok(bound_certificates(f, ForcePoint::boundary(-0.8, -1.5), 0.5)));

  const auto cr = chordal_radial_certificate(trace(make_sine_series(Setting::RadialDisk, {0.3}, {2.0}), 500, 1));
  CHECK(cr.ok);
  CHECK(cr.lower <= cr.value);
  CHECK(cr.value <= cr.upper);
}

TEST_CASE("coordinate changes") {
  const Curve c = trace(make_chordal_sle0(1, 1), 1000, 0.3);
  const auto cc = coordinate_change_chordal(c, 1, 1);
  CHECK(std::abs(cc.lhs) < 1e-2);
  CHECK(std::abs(cc.rhs) < 1e-2);

  CHECK(std::abs(chordal_swap_map(cplx(0.3, 0.4), 1) - cplx(0.3, 0.4) / (1.0 - cplx(0.3, 0.4))) < 1e-15);
  CHECK(std::abs(disk_to_halfplane(0)-cplx(0, 1)) < 1e-15);
  CHECK(std::abs(disk_to_halfplane(1)) < 1e-15);
  const cplx w = radial_to_chordal_map(0, 2.0);
  CHECK(std::arg(w) == doctest::Approx(kPi - 1.0).epsilon(1e-12));
}

TEST_CASE("non absolutely continuous driving") {
  std::mt19937_64 g(3);
  std::normal_distribution<double> n01;
  std::vector<double> t{0}, v{0};
  const int n = 4096;
  for (int i = 1; i <= n; ++i) {
    t.push_back(double(i) / n);
    v.push_back(v.back() + n01(g) / std::sqrt(double(n)));
  }
  const auto bm = DrivingFunction::sampled(Setting::ChordalHalfPlane, t, v, "bm");
  CHECK_FALSE(passes_absolute_continuity(bm, 1));
  CHECK(std::isinf(rho_energy_direct(bm, ForcePoint::boundary(1, 0), 1)));
  CHECK(passes_absolute_continuity(make_chordal_sle0(1, 1), 1));
}

TEST_CASE("force point reached early") {
  const auto f = make_chordal_sle0(-5, 1);
  CHECK_THROWS_AS(rho_energy_direct(f, ForcePoint::boundary(1, -5), f.horizon()), Error);
}
