#include <cmath>

#include "doctest.h"
#include "slerho/driving.hpp"
#include "slerho/error.hpp"
#include "slerho/geometry.hpp"
#include "slerho/loewner.hpp"
#include "slerho/zipper.hpp"

using namespace slerho;

namespace {
Curve polyline(std::vector<cplx> pts, Domain d = Domain::HalfPlane) {
  Curve c;
  c.points = std::move(pts);
  c.domain = d;
  return c;
}
}  // namespace

TEST_CASE("vertical segment has zero driving") {
  std::vector<cplx> pts;
  for (int k = 0; k <= 1000; ++k) pts.push_back(cplx(0, 2 * std::sqrt(k / 1000.0)));
  const auto z = extract_driving(polyline(pts), Setting::ChordalHalfPlane);
  double sup = 0;
  for (double t : z.capacity_times) sup = std::max(sup, std::abs(z.drive(t)));
  CHECK(sup < 1e-3);
  CHECK(z.capacity_times.back() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ray recovers the square-root driving") {
  // a ray at angle 2 pi / 3 is driven by -sqrt(2t)
  const Curve c = trace(make_ray(2), 2000, 1);
  const auto z = extract_driving(c, Setting::ChordalHalfPlane);
  double dev = 0;
  for (std::size_t k = 0; k < z.capacity_times.size(); k += 10) {
    const double t = z.capacity_times[k];
    dev = std::max(dev, std::abs(z.drive(t) + std::sqrt(2 * t)));
  }
  CHECK(dev < 1e-2);

  // capacity grows like |gamma|^2 along an arc-length ray
  std::vector<cplx> pts;
  const cplx dir = std::polar(1.0, 2 * kPi / 3);
  for (int k = 0; k <= 400; ++k) pts.push_back(dir * (k / 400.0));
  const auto r = extract_driving(polyline(pts), Setting::ChordalHalfPlane, {false, 10, false, 0});
  const double c1 = r.capacity_times[100] / std::norm(pts[100]);
  const double c2 = r.capacity_times[400] / std::norm(pts[400]);
  CHECK(c1 == doctest::Approx(c2).epsilon(2e-2));
}

TEST_CASE("roundtrip residual decreases under refinement") {
  const auto f = make_chordal_sle0(1, 1);
  const auto a = extract_driving(trace(f, 250, 1), Setting::ChordalHalfPlane);
  const auto b = extract_driving(trace(f, 500, 1), Setting::ChordalHalfPlane);
  CHECK(b.residual < 1e-2);
  CHECK(b.residual < a.residual);
}

TEST_CASE("zipper inverts the forward trace") {
  const auto f = make_sine_series(Setting::ChordalHalfPlane, {0.3, 0.1}, {3.0, 8.0});
  const Curve c = trace(f, 800, 1);
  const auto z = extract_driving(c, Setting::ChordalHalfPlane);
  double dev = 0;
  for (std::size_t k = 0; k < c.size(); k += 20) dev = std::max(dev, std::abs(z.drive(z.capacity_times[k]) - f(c.params[k])));
  CHECK(dev < 1e-2);
}

TEST_CASE("radial zipper") {
  const auto f = make_radial_sle0(1, 2);
  const Curve c = trace(f, 600, 1);
  const auto z = extract_driving(c, Setting::RadialDisk);
  CHECK(z.drive.setting() == Setting::RadialDisk);
  CHECK(z.capacity_times.back() == doctest::Approx(1.0).epsilon(1e-2));
  for (std::size_t k = 1; k < z.capacity_times.size(); ++k) CHECK(z.capacity_times[k] > z.capacity_times[k - 1]);
  CHECK(z.residual < 2e-2);
}

TEST_CASE("circle arc in the disk has increasing conformal radius times") {
  std::vector<cplx> pts;
  const cplx c(0.5, 0.5);
  for (int k = 0; k <= 200; ++k) pts.push_back(c + std::abs(1.0 - c) * std::polar(1.0, -kPi / 4 - k * 0.005));
  const auto z = extract_driving(polyline(pts, Domain::Disk), Setting::RadialDisk);
  for (std::size_t k = 1; k < z.capacity_times.size(); ++k) CHECK(z.capacity_times[k] > z.capacity_times[k - 1]);
}

TEST_CASE("capacity reparametrization") {
  const Curve c = trace(make_chordal_sle0(1, 1), 400, 1);
  const Curve r = capacity_reparametrize(c);
  CHECK(r.size() == c.size());
  CHECK(hausdorff(c, r) < 1e-3);

  std::vector<cplx> pts;
  const cplx dir = std::polar(1.0, 2 * kPi / 3);
  for (int k = 0; k <= 300; ++k) pts.push_back(dir * (k / 300.0));
  const Curve ray = capacity_reparametrize(polyline(pts), Setting::ChordalHalfPlane, 100);
  // uniform capacity: |gamma(t_k)| grows like sqrt(t_k)
  CHECK(std::abs(ray.points[25]) / std::abs(ray.points[100]) == doctest::Approx(0.5).epsilon(2e-2));
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(extract_driving(polyline({cplx(0, 0), cplx(0, 0.1), cplx(0, 0.1), cplx(0, 0.2)}),
                                  Setting::ChordalHalfPlane),
                  Error);
  CHECK_THROWS_AS(extract_driving(polyline({cplx(0, 0), cplx(0, 0.1), cplx(0.1, -0.2)}), Setting::ChordalHalfPlane),
                  Error);

  std::vector<cplx> pts;
  for (int k = 0; k <= 50; ++k) pts.push_back(cplx(0, 0.01 * k));
  pts.push_back(cplx(0, 3));
  try {
    extract_driving(polyline(pts), Setting::ChordalHalfPlane);
    FAIL("expected IrregularSpacing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IrregularSpacing);
  }
  ZipperOptions o;
  o.spacing_guard = false;
  CHECK_NOTHROW(extract_driving(polyline(pts), Setting::ChordalHalfPlane, o));
}

TEST_CASE("discrete energy of a ray grows with resolution") {
  const auto energy = [](std::size_t n) {
    std::vector<cplx> pts;
    const cplx dir = std::polar(1.0, 2 * kPi / 3);
    for (std::size_t k = 0; k <= n; ++k) pts.push_back(dir * std::pow(double(k) / n, 2.0));
    ZipperOptions o;
    o.compute_residual = false;
    o.spacing_guard = false;
    const auto z = extract_driving(polyline(pts), Setting::ChordalHalfPlane, o);
    double e = 0;
    for (std::size_t k = 1; k < z.capacity_times.size(); ++k) {
      const double dt = z.capacity_times[k] - z.capacity_times[k - 1];
      const double dw = z.drive(z.capacity_times[k]) - z.drive(z.capacity_times[k - 1]);
      e += 0.5 * dw * dw / dt;
    }
    return e;
  };
  const double e1 = energy(100), e2 = energy(400), e3 = energy(1600);
  CHECK(e2 > e1);
  CHECK(e3 > e2);
}
