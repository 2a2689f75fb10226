#include <cmath>

#include "doctest.h"
#include "slerho/dirichlet.hpp"
#include "slerho/error.hpp"

using namespace slerho;

TEST_CASE("trivial maps have zero energy") {
  const SectorDomain annulus{1, 5, 0, 2 * kPi};
  CHECK(std::abs(grid_dirichlet(identity_map(), annulus, 16, 16)) < 1e-14);
  CHECK(std::abs(grid_dirichlet(scaling_map(3.5), annulus, 16, 16)) < 1e-14);
  CHECK(std::abs(grid_dirichlet(scaling_map(0.2), RectDomain{-1, 1, 0.5, 2}, 16, 16)) < 1e-14);
}

TEST_CASE("power map against the polar integral") {
  // |grad log|h'||^2 = (p - 1)^2 / |z|^2
  for (double p : {0.5, 1.5, 3.0}) {
    for (double angle : {kPi / 3, kPi}) {
      const double oracle = angle * (p - 1) * (p - 1) * std::log(4.0 / 0.5) / kPi;
      CHECK(power_map_dirichlet(p, angle, 0.5, 4) == doctest::Approx(oracle).epsilon(1e-14));
      const double g = grid_dirichlet(power_map(p), SectorDomain{0.5, 4, 0.2, 0.2 + angle}, 24, 24);
      CHECK(g == doctest::Approx(oracle).epsilon(1e-10));
    }
  }
}

TEST_CASE("Cartesian grid converges at first order or better") {
  const double p = 2.5;
  // int over [1,2]x[1,2] of 1/(x^2+y^2), by a fine Simpson product rule
  const int n = 400;
  double s = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double x = 1 + double(i) / n, y = 1 + double(j) / n;
      const double wi = i == 0 || i == n ? 1 : i % 2 ? 4 : 2;
      const double wj = j == 0 || j == n ? 1 : j % 2 ? 4 : 2;
      s += wi * wj / (x * x + y * y);
    }
  const double oracle = (p - 1) * (p - 1) * s / (9.0 * n * n) / kPi;
  const RectDomain rect{1, 2, 1, 2};
  const double e1 = std::abs(grid_dirichlet(power_map(p), rect, 8, 8) - oracle);
  const double e2 = std::abs(grid_dirichlet(power_map(p), rect, 16, 16) - oracle);
  CHECK(e1 / e2 >= 2 * 0.95);
  CHECK(e2 < 1e-3 * oracle);
}

TEST_CASE("rotation invariance") {
  const auto m = power_map(1.7);
  const SectorDomain dom{1, 3, 0.3, 1.2};
  const double a = grid_dirichlet(m, dom, 32, 32);
  const double b = grid_dirichlet(rotated(m, 0.4), SectorDomain{1, 3, 0.3 - 0.4, 1.2 - 0.4}, 32, 32);
  CHECK(b == doctest::Approx(a).epsilon(1e-9));
}

TEST_CASE("finite-difference gradient") {
  auto m = power_map(2.0);
  m.gradient = nullptr;
  const double g = grid_dirichlet(m, SectorDomain{1, 2, 0, kPi / 2}, 32, 32);
  CHECK(g == doctest::Approx(power_map_dirichlet(2.0, kPi / 2, 1, 2)).epsilon(1e-6));
}

TEST_CASE("singularity on the grid") {
  try {
    grid_dirichlet(power_map(2.0), RectDomain{-1, 1, -1, 1}, 8, 8);
    FAIL("expected SingularityOnGrid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularityOnGrid);
  }
}

TEST_CASE("corner constant") {
  CHECK(c_beta(2.0 / 3) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(c_beta(0.5) == doctest::Approx(0.0));
  CHECK(c_beta(1.0 / 3) == doctest::Approx(c_beta(2.0 / 3)));
  CHECK(c_beta(0.4) == doctest::Approx(0.04 / 0.48).epsilon(1e-14));
}

TEST_CASE("renormalized energy of the two-sector map") {
  for (double beta : {1.0 / 3, 0.4, 2.0 / 3}) {
    const auto st = renormalized_dirichlet(two_sector_map(beta), beta, 1, {10, 100, 1000, 10000});
    CHECK(st.slope == doctest::Approx(c_beta(beta)).epsilon(1e-2));
    REQUIRE(st.renormalized.size() == 4);
    for (std::size_t k = 0; k < 4; ++k)
      CHECK(st.renormalized[k] == doctest::Approx(st.dirichlet[k] - st.c_beta * std::log(st.radii[k])));
    CHECK(std::isfinite(st.limit));
  }
  const auto half = renormalized_dirichlet(two_sector_map(0.5), 0.5, 1, {10, 100, 1000});
  CHECK(std::abs(half.slope) < 1e-10);
}

TEST_CASE("renormalization that does not settle") {
  // the power map is not matched to the corner: its energy grows faster than c_beta log R
  CHECK_THROWS_AS(renormalized_dirichlet(power_map(3.0), 2.0 / 3, 1, {10, 100, 1000, 10000}), Error);
}

TEST_CASE("trivial identity checks") {
  for (double rho : {-1.0, 0.0, 2.0, 5.0}) {
    const auto checks = theorem_identity_trivial_checks(rho);
    CHECK_FALSE(checks.empty());
    for (const auto& c : checks) {
      INFO(c.name);
      CHECK(c.ok);
      CHECK(c.lhs == doctest::Approx(c.rhs));
    }
  }
  // (rho + 6)(rho - 2) / 8 vanishes at rho = 2
  for (const auto& c : theorem_identity_trivial_checks(2))
    if (c.name == "radial-point-coefficient") CHECK(std::abs(c.lhs) < 1e-15);
  // rho = 0: rho (rho + 4) / 4 = 0 and the corner angle is 1/2
  for (const auto& c : theorem_identity_trivial_checks(0)) {
    if (c.name == "chordal-point-coefficient") CHECK(std::abs(c.lhs) < 1e-15);
    if (c.name == "chordal-corner-constant") CHECK(std::abs(c.lhs) < 1e-15);
  }
}
