#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "slerho/driving.hpp"
#include "slerho/error.hpp"
#include "slerho/geometry.hpp"
#include "slerho/loewner.hpp"
#include "slerho/zipper.hpp"

using namespace slerho;

namespace {
DrivingFunction zero_drive() {
  return DrivingFunction::from_function(
      Setting::ChordalHalfPlane, [](double) { return 0.0; }, kInf, [](double) { return 0.0; }, "zero");
}
}  // namespace

TEST_CASE("flow under zero driving") {
  const std::vector<cplx> pts{cplx(1, 1), cplx(0, 3), cplx(-2, 0.5)};
  const auto res = flow_points(zero_drive(), pts, 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cplx expect = std::sqrt(pts[i] * pts[i] + 4.0);
    if (expect.imag() < 0) expect = -expect;
    CHECK(std::abs(res.values[i] - expect) < 1e-8);
    CHECK_FALSE(res.swallowed[i]);
  }

  // the tip 2i sqrt(T) is swallowed at T
  const std::vector<cplx> tip{cplx(0, 2 * std::sqrt(0.5))};
  const auto t = flow_points(zero_drive(), tip, 1);
  CHECK(t.swallowed[0]);
  CHECK(t.stop_times[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("boundary gap law") {
  const auto f = make_chordal_sle0(2, 1);
  const std::vector<cplx> x0{cplx(1, 0)};
  const auto res = flow_points(f, x0, 1);
  CHECK(res.values[0].real() - f(1) == doctest::Approx(3.0).epsilon(1e-8));

  const auto tr = track_force_point(f, ForcePoint::boundary(1, 2), 1);
  CHECK(tr.stop == StopReason::ReachedT);
  for (std::size_t k = 0; k < tr.size(); k += 50)
    CHECK(tr.gap(k) == doctest::Approx(std::sqrt(1 + 8 * tr.times[k])).epsilon(1e-8));
}

TEST_CASE("interior tracks") {
  // g_t(iy) = i sqrt(y^2 - 4t) below the tip
  const auto tr = track_force_point(zero_drive(), ForcePoint::interior(cplx(0, 3), -6), 1);
  CHECK(tr.stop == StopReason::ReachedT);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(tr.theta[k] == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(tr.y(k) == doctest::Approx(std::sqrt(9 - 4 * tr.times[k])).epsilon(1e-8));
  }

  const cplx z0 = std::polar(1.3, 1.0);
  const auto sp = track_force_point(make_chordal_sle0_spiral(z0), ForcePoint::interior(z0, -4), 0.4);
  double dev = 0, mono = 0;
  for (std::size_t k = 0; k < sp.size(); ++k) {
    dev = std::max(dev, std::abs(std::sin(sp.theta[k]) - std::sin(1.0)));
    mono = std::max(mono, sp.log_deriv[k] + std::log(sp.y(k) / sp.y(0)));
  }
  CHECK(dev < 1e-7);
  CHECK(mono <= 1e-12);
}

TEST_CASE("radial track gap") {
  for (double rho : {-1.0, 0.5, 3.0}) {
    const auto f = make_radial_sle0(rho, 2.0);
    const auto tr = track_force_point(f, ForcePoint::radial(2.0, rho), 2);
    double dev = 0;
    for (std::size_t k = 0; k < tr.size(); ++k)
      dev = std::max(dev, std::abs(tr.force_angle[k] - tr.driving[k] -
                                   radial_sle0_gap(rho, 2.0, tr.times[k])));
    CHECK(dev < 1e-7);
  }
}

TEST_CASE("force point approach") {
  const auto f = make_chordal_sle0(-5, 1);
  const auto tr = track_force_point(f, ForcePoint::boundary(1, -5), f.horizon());
  CHECK(tr.stop == StopReason::ForcePointApproach);
  CHECK(tr.stop_lo <= tr.stop_hi);
  CHECK_THROWS_AS(require_complete(tr), Error);
}

TEST_CASE("trace of zero driving") {
  const Curve c = trace(zero_drive(), 400, 1);
  double dev = 0;
  for (cplx z : c.points) dev = std::max(dev, std::abs(z.real()) + std::max(0.0, z.imag() - 2));
  CHECK(dev < 1e-3);
  CHECK(std::abs(c.points.back() - cplx(0, 2)) < 1e-3);
}

TEST_CASE("ray trace angle") {
  const Curve c = trace(make_ray(2), 2000, 1);
  double dev = 0;
  for (std::size_t k = c.size() / 2; k < c.size(); ++k)
    dev = std::max(dev, std::abs(std::arg(c.points[k]) - 2 * kPi / 3));
  CHECK(dev < 0.02);
}

TEST_CASE("curve ending at the force point") {
  const auto f = make_chordal_sle0(-5, 1);
  TraceOptions o;
  o.grid = TraceGrid::GeometricEnd;
  const Curve c = trace(f, 2000, f.horizon(), o);
  CHECK(std::abs(c.points.back() - cplx(1, 0)) < 1e-2);
}

TEST_CASE("Loewner scaling") {
  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.4, 0.2}, {3.0, 7.0});
  const double lambda = 2.5;
  const Curve a = trace(f, 300, 1), b = trace(f.rescaled(lambda), 300, lambda * lambda);
  REQUIRE(a.size() == b.size());
  double dev = 0;
  for (std::size_t k = 0; k < a.size(); ++k) dev = std::max(dev, std::abs(b.points[k] - lambda * a.points[k]));
  CHECK(dev < 1e-9);
}

TEST_CASE("trace refines under doubling") {
  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.4}, {4.0});
  const Curve fine = trace(f, 3200, 1);
  const double d1 = hausdorff(trace(f, 200, 1), fine), d2 = hausdorff(trace(f, 800, 1), fine);
  CHECK(d2 < d1);
}

TEST_CASE("capacity of the trace") {
  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.3}, {5.0});
  const Curve c = trace(f, 400, 1);
  ZipperOptions zo;
  zo.compute_residual = false;
  const auto z = extract_driving(c, Setting::ChordalHalfPlane, zo);
  for (std::size_t k = 40; k < c.size(); k += 40)
    CHECK(z.capacity_times[k] == doctest::Approx(c.params[k]).epsilon(1e-2));
}

TEST_CASE("slit maps invert each other") {
  for (cplx z : {cplx(0.3, 0.7), cplx(-2, 0.1), cplx(5, 3)}) {
    CHECK(std::abs(slit::chordal_inverse(slit::chordal_forward(z, 0.2, 0.01), 0.2, 0.01) - z) < 1e-12);
  }
  for (cplx z : {cplx(0.3, 0.2), cplx(-0.5, 0.1), cplx(0, -0.9)}) {
    CHECK(std::abs(slit::radial_inverse(slit::radial_forward(z, 0.4, 0.05), 0.4, 0.05) - z) < 1e-12);
  }
  // conformal radius e^{dt}
  const double h = 1e-6, dt = 0.05;
  const cplx d = (slit::radial_forward(cplx(h, 0), 0.4, dt) - slit::radial_forward(cplx(-h, 0), 0.4, dt)) / (2 * h);
  CHECK(std::abs(d) == doctest::Approx(std::exp(dt)).epsilon(1e-8));
}

TEST_CASE("radial trace starts at 1") {
  const Curve c = trace(make_radial_sle0(1, kPi), 200, 1);
  CHECK(std::abs(c.points.front() - cplx(1, 0)) < 1e-12);
  for (cplx z : c.points) CHECK(std::abs(z) <= 1 + 1e-12);
}

TEST_CASE("whole-plane closed forms") {
  WholePlaneParams p;
  p.rho = -6;
  p.span = 200;
  const Curve circ = trace_wholeplane(p);
  const auto fit = fit_circle(circ.points);
  CHECK(fit.max_residual < 1e-3 * fit.radius);
  CHECK(std::abs(std::abs(fit.center) - fit.radius) < 1e-3 * fit.radius);
  CHECK(std::abs(circ.points.front()) < 1e-2);
  CHECK_FALSE(first_self_intersection(circ.points, 1e-9).has_value());

  p.rho = -3;
  p.cut_loop = false;
  CHECK(first_self_intersection(trace_wholeplane(p).points, 1e-9).has_value());
  p.rho = -5;
  CHECK_FALSE(first_self_intersection(trace_wholeplane(p).points, 1e-9).has_value());

  // rho = -2: log-spiral, log|z| affine in the unwrapped argument
  p.rho = -2;
  p.v0 = kPi / 2;
  const Curve sp = trace_wholeplane(p);
  std::vector<double> a, l;
  double arg = std::arg(sp.points[1]);
  for (std::size_t k = 1; k < sp.size(); ++k) {
    if (k > 1) arg += std::arg(sp.points[k] / sp.points[k - 1]);
    a.push_back(arg);
    l.push_back(std::log(std::abs(sp.points[k])));
  }
  const std::size_t m = a.size() / 2;
  const double slope = (l.back() - l[m]) / (a.back() - a[m]);
  double dev = 0;
  for (std::size_t k = 0; k < a.size(); k += 17)
    dev = std::max(dev, std::abs(l[k] - l[m] - slope * (a[k] - a[m])));
  CHECK(dev < 1e-8);
}

TEST_CASE("whole-plane self-intersection parameter") {
  const double x1 = wholeplane_self_intersection_x(-3);
  CHECK(x1 > 0);
  // the power map sends x1 + i and -x1 + i to the same point
  const double p = -4.0 / (2 - 3);
  const cplx a = std::pow(cplx(x1, 1), p), b = std::pow(cplx(-x1, 1), p);
  CHECK(std::abs(a - b) < 1e-9 * std::abs(a));
}
