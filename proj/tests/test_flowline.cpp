#include <cmath>

#include "doctest.h"
#include "slerho/driving.hpp"
#include "slerho/error.hpp"
#include "slerho/flowline.hpp"
#include "slerho/geometry.hpp"
#include "slerho/loewner.hpp"

using namespace slerho;

namespace {
Curve segment(cplx a, cplx b, int n = 10) {
  Curve c;
  for (int k = 0; k <= n; ++k) c.points.push_back(a + (b - a) * (double(k) / n));
  return c;
}
}  // namespace

TEST_CASE("field values") {
  CHECK(field_eval(FlowField::boundary(0, 1), cplx(0, 0.7)).angle == doctest::Approx(kPi / 2));
  for (cplx z : {cplx(1, 1), cplx(-2, 0.3), cplx(0.1, -4)}) {
    CHECK(field_eval(FlowField::wholeplane(-6), z).angle == doctest::Approx(kPi));
    const double h = field_eval(FlowField::wholeplane_minus2(kPi), z).angle;
    // C = 3 pi / 2 - v0 / 2 = pi: the flow direction points at the origin
    CHECK(std::abs(std::polar(1.0, h) + z / std::abs(z)) < 1e-12);
  }
}

TEST_CASE("branches are continued along a path") {
  const auto f = FlowField::wholeplane(-3);
  BranchState b;
  double prev = 0;
  for (int k = 0; k <= 64; ++k) {
    const auto v = field_eval(f, std::polar(1.0, k * 2 * kPi / 64), b);
    b = v.branch;
    if (k > 0) CHECK(v.angle - prev == doctest::Approx(0.75 * 2 * kPi / 64).epsilon(1e-9));
    prev = v.angle;
  }
  // a full turn lifts the argument by 2 pi
  CHECK(b.arg_z == doctest::Approx(2 * kPi).epsilon(1e-12));

  BranchState near;
  near.arg_z = 0.1;
  CHECK_THROWS_AS(field_eval(f, cplx(-1, 0.01), near), Error);
}

TEST_CASE("rho = 0 flow-line is vertical") {
  FlowlineOptions o;
  o.max_length = 1;
  const auto fl = integrate_flowline(FlowField::boundary(0, 1), boundary_flowline_start(1), o);
  double dev = 0;
  for (cplx z : fl.curve.points) dev = std::max(dev, std::abs(z.real()));
  CHECK(dev < 1e-3);
  CHECK(fl.stop == FlowStop::MaxLength);
  CHECK(fl.curve.parametrization == Parametrization::ArcLength);
}

TEST_CASE("boundary flow-line matches the Loewner trace") {
  const auto f = make_chordal_sle0(2, 1);
  const Curve tr = trace(f, 2000, 1, {TraceGrid::SqrtUniform, 0});
  FlowlineOptions o;
  o.ds = 2e-3;
  o.max_length = 1.2 * tr.length();
  const auto fl = integrate_flowline(FlowField::boundary(2, 1), boundary_flowline_start(1), o);
  const Curve cut = truncate_near(fl.curve, tr.points.back());
  CHECK(curve_distance(cut, tr) < 1e-2);
}

TEST_CASE("interior rho = -4 flow-line is the logarithmic spiral") {
  const cplx z0 = std::polar(1.0, kPi / 3);
  const auto f = make_chordal_sle0_spiral(z0);
  TraceOptions to;
  to.grid = TraceGrid::GeometricEnd;
  const Curve tr = trace(f, 4000, f.horizon(), to);
  FlowlineOptions o;
  o.ds = 1e-3;
  const auto fl = integrate_flowline(FlowField::interior(-4, z0), boundary_flowline_start(1), o);
  CHECK(fl.stop == FlowStop::ReachedSingularity);
  CHECK(curve_distance(fl.curve, tr) < 1e-2 * std::abs(z0));
}

TEST_CASE("curve distance") {
  const Curve a = segment(0, 1);
  CHECK(curve_distance(a, a) == doctest::Approx(0.0));
  CHECK(curve_distance(a, segment(cplx(0, 0.25), cplx(1, 0.25))) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(curve_distance(a, segment(0, 2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("whole-plane flow-line is a circle for rho = -6") {
  FlowlineOptions o;
  o.ds = 1e-3;
  o.max_length = 2;
  const auto fl = integrate_flowline(FlowField::wholeplane(-6), cplx(0, 1), o);
  // h = pi: straight line to the left
  for (cplx z : fl.curve.points) CHECK(z.imag() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fl.curve.points.back().real() == doctest::Approx(-2.0).epsilon(1e-6));
}
