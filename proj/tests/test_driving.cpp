#include <cmath>

#include "doctest.h"
#include "slerho/driving.hpp"
#include "slerho/error.hpp"

using namespace slerho;

TEST_CASE("chordal SLE0(rho) closed form") {
  const auto f = make_chordal_sle0(-2, 1);
  for (double t : {0.0, 0.3, 1.7}) CHECK(f(t) == doctest::Approx(2 * t).epsilon(1e-14));

  const auto zero = make_chordal_sle0(0, 1);
  CHECK(zero(0.8) == doctest::Approx(0.0));

  const auto two = make_chordal_sle0(2, 1);
  CHECK(two(1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(two(0.5) == doctest::Approx((1 - std::sqrt(5.0)) / 2).epsilon(1e-14));
}

TEST_CASE("chordal reflection and horizon") {
  for (double rho : {-1.5, 1.0, 3.0}) {
    const auto a = make_chordal_sle0(rho, 0.7), b = make_chordal_sle0(rho, -0.7);
    for (double t : {0.1, 0.4, 2.0}) CHECK(b(t) == doctest::Approx(-a(t)).epsilon(1e-14));
  }
  const auto f = make_chordal_sle0(-5, 1);
  CHECK(f.horizon() == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK_THROWS_AS(f(0.2), Error);
  CHECK(std::isinf(make_chordal_sle0(1, 1).horizon()));
}

TEST_CASE("radial SLE0(rho) closed form") {
  CHECK(make_radial_sle0(-2, kPi)(0.7) == doctest::Approx(0.0));
  CHECK(make_radial_sle0(5, kPi)(1.3) == doctest::Approx(0.0));

  const double expect = -0.5 * (2 * std::acos(std::cos(kPi / 4) * std::exp(-1.0)) - kPi / 2);
  CHECK(make_radial_sle0(2, kPi / 2)(1) == doctest::Approx(expect).epsilon(1e-14));

  // RK4 on w' = (rho/2) cot((w - v)/2), v' = cot((v - w)/2)
  const double rho = 2, v0 = kPi / 2;
  double w = 0, v = v0;
  const int n = 4000;
  const double h = 1.0 / n;
  auto rhs = [&](double ww, double vv) {
    return std::pair{rho / 2 / std::tan((ww - vv) / 2), 1 / std::tan((vv - ww) / 2)};
  };
  for (int i = 0; i < n; ++i) {
    auto [a1, b1] = rhs(w, v);
    auto [a2, b2] = rhs(w + h / 2 * a1, v + h / 2 * b1);
    auto [a3, b3] = rhs(w + h / 2 * a2, v + h / 2 * b2);
    auto [a4, b4] = rhs(w + h * a3, v + h * b3);
    w += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
    v += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
  }
  CHECK(w == doctest::Approx(expect).epsilon(1e-9));
  CHECK(v - w == doctest::Approx(radial_sle0_gap(rho, v0, 1)).epsilon(1e-9));
}

TEST_CASE("radial gap is constant for rho = -2") {
  for (double t : {0.0, 1.0, 5.0}) CHECK(radial_sle0_gap(-2, 1.1, t) == doctest::Approx(1.1));
  CHECK(std::isfinite(make_radial_sle0(-3, 1).horizon()));
  CHECK(std::isinf(make_radial_sle0(-1, 1).horizon()));
}

TEST_CASE("interior spiral driving") {
  CHECK(make_chordal_sle0_spiral(cplx(0, 1))(0.2) == doctest::Approx(0.0));
  const auto f = make_chordal_sle0_spiral(std::polar(1.0, kPi / 4));
  CHECK(f.horizon() == doctest::Approx(0.25));
  CHECK(f(0.2) == doctest::Approx(std::sqrt(2.0) * (1 - std::sqrt(0.2))).epsilon(1e-13));
  const auto g = make_chordal_sle0_spiral(std::polar(2.0, kPi / 3));
  CHECK(g(0) == doctest::Approx(0.0));
  CHECK(g.derivative(0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("whole-plane driving") {
  const auto f = make_wholeplane_sle0(-6, 0, 0, Orientation::Positive);
  CHECK(f(0) == doctest::Approx(3 * kPi / 2).epsilon(1e-12));
  CHECK(f.start() == doctest::Approx(-20.0));
  const auto g = make_wholeplane_sle0(-2, 0, 0, Orientation::Positive, kPi);
  CHECK(g(-3) == doctest::Approx(0.0));
  const auto c = make_wholeplane_sle0(-4, 0.4, 0, Orientation::Positive);
  CHECK(std::abs(c(c.start()) - 0.4) < 1e-3);
}

TEST_CASE("rays") {
  CHECK(make_ray(0)(0.5) == doctest::Approx(0.0));
  CHECK(ray_angle(0) == doctest::Approx(kPi / 2));
  CHECK(ray_angle(2) == doctest::Approx(2 * kPi / 3));
  // force point at 0+: the x0 -> 0 limit of the chordal closed form
  const auto near = make_chordal_sle0(2, 1e-12);
  for (double t : {0.01, 0.49, 3.0}) CHECK(make_ray(2)(t) == doctest::Approx(near(t)).epsilon(1e-10));
  CHECK(make_ray(2)(0.49) == doctest::Approx(-std::sqrt(2 * 0.49)).epsilon(1e-13));
  double prev = ray_angle(-1.9);
  for (double rho = -1.5; rho < 100; rho += 2.5) {
    CHECK(ray_angle(rho) > prev);
    CHECK(ray_angle(rho) < kPi);
    prev = ray_angle(rho);
  }
}

TEST_CASE("analytic derivative agrees with finite differences, first order") {
  const auto f = make_chordal_sle0(1.5, 0.8);
  const auto err = [&](double h) {
    double e = 0;
    for (double t = 0.1; t <= 1.0; t += 0.1) e = std::max(e, std::abs((f(t + h) - f(t)) / h - f.derivative(t)));
    return e;
  };
  const double e1 = err(1e-3), e2 = err(5e-4);
  CHECK(e2 < e1);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("sampled driving") {
  const auto s = DrivingFunction::sampled(Setting::ChordalHalfPlane, {0, 1, 2}, {0, 1, 4}, "csv");
  CHECK(s(0.5) == doctest::Approx(0.5));
  CHECK(s(1.5) == doctest::Approx(2.5));
  CHECK(s.derivative(1) == doctest::Approx(2.0));
  CHECK(s.knots().size() == 3);
  CHECK_THROWS_AS(s(2.5), Error);

  const auto sin = make_sine_series(Setting::ChordalHalfPlane, {0.3}, {2.0}, 0.1);
  const auto sm = sample_uniform(sin, 1, 10);
  REQUIRE(sm.t.size() == 11);
  CHECK(sm.value[10] == doctest::Approx(0.3 * std::sin(2.0) + 0.1));
}

TEST_CASE("shift and rescale") {
  const auto f = make_chordal_sle0(1, 1);
  const auto g = f.shifted(0.3);
  CHECK(g(0.2) == doctest::Approx(f(0.5) - f(0.3)));
  const auto r = f.rescaled(2);
  CHECK(r(0.8) == doctest::Approx(2 * f(0.2)));
  const auto sum = add(f, make_sine_series(Setting::ChordalHalfPlane, {0.1}, {1.0}));
  CHECK(sum(0.4) == doctest::Approx(f(0.4) + 0.1 * std::sin(0.4)));
  CHECK(sum.has_analytic_derivative());
}
