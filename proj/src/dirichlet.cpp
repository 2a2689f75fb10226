#include "slerho/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "slerho/energy.hpp"
#include "slerho/error.hpp"

namespace slerho {

ConformalMapSample identity_map() {
  return {"identity", [](cplx) { return 0.0; }, [](cplx) { return cplx(0, 0); }, {}};
}

ConformalMapSample scaling_map(double lambda) {
  require(lambda > 0, "scale must be positive");
  const double l = std::log(lambda);
  return {"scaling", [l](cplx) { return l; }, [](cplx) { return cplx(0, 0); }, {}};
}

ConformalMapSample power_map(double p) {
  require(p != 0 && std::isfinite(p), "exponent must be nonzero");
  const double lp = std::log(std::abs(p));
  return {"power",
          [p, lp](cplx z) { return lp + (p - 1) * std::log(std::abs(z)); },
          [p](cplx z) { return std::conj((p - 1) / z); },
          {cplx(0, 0)}};
}

ConformalMapSample two_sector_map(double beta) {
  require(beta > 0 && beta < 1, "beta must lie in (0, 1)");
  const double split = 2 * beta * kPi;
  const double p1 = 1 / (2 * beta), p2 = 1 / (2 - 2 * beta);
  auto power = [=](cplx z) {
    double a = std::arg(z);
    if (a < 0) a += 2 * kPi;
    return a < split ? p1 : p2;
  };
  return {"two-sector",
          [=](cplx z) {
            const double p = power(z);
            return std::log(p) + (p - 1) * std::log(std::abs(z));
          },
          [=](cplx z) { return std::conj((power(z) - 1) / z); },
          {cplx(0, 0)}};
}

ConformalMapSample rotated(const ConformalMapSample& m, double phi) {
  const cplx e = std::polar(1.0, phi);
  ConformalMapSample r;
  r.name = m.name + "/rotated";
  auto f = m.log_abs_deriv;
  r.log_abs_deriv = [f, e](cplx z) { return f(e * z); };
  if (m.gradient) {
    auto g = m.gradient;
    r.gradient = [g, e](cplx z) { return std::conj(e) * g(e * z); };
  }
  for (cplx s : m.singular_points) r.singular_points.push_back(std::conj(e) * s);
  return r;
}

namespace {

double row_sum(std::size_t n, auto&& cell) {
  std::vector<double> part(n);
  detail::parallel_for(n, [&](std::size_t i) { part[i] = cell(i); }, 16);
  double s = 0;
  for (double v : part) s += v;
  return s;
}

}  // namespace

double grid_dirichlet(const ConformalMapSample& m, const SectorDomain& d, std::size_t n_r,
                      std::size_t n_theta) {
  require(d.r_in > 0 && d.r_out > d.r_in, "need 0 < r_in < r_out");
  require(d.theta1 > d.theta0, "need theta0 < theta1");
  require(n_r >= 1 && n_theta >= 1, "need at least one cell");
  for (cplx p : m.singular_points) {
    const double r = std::abs(p);
    double a = std::arg(p);
    while (a < d.theta0) a += 2 * kPi;
    if (r >= d.r_in && r <= d.r_out && a <= d.theta1) {
      std::ostringstream os;
      os << "singular point " << p.real() << "+" << p.imag() << "i lies in the sector";
      fail(ErrorCode::SingularityOnGrid, os.str());
    }
  }
  const double s0 = std::log(d.r_in), hs = (std::log(d.r_out) - s0) / n_r;
  const double ht = (d.theta1 - d.theta0) / n_theta;
  auto at = [](double s, double t) { return std::polar(std::exp(s), t); };
  // in log-polar coordinates |grad u|^2 dA = (u_s^2 + u_t^2) ds dt
  const double total = row_sum(n_r, [&](std::size_t i) {
    const double s = s0 + (i + 0.5) * hs;
    double acc = 0;
    for (std::size_t j = 0; j < n_theta; ++j) {
      const double t = d.theta0 + (j + 0.5) * ht;
      if (m.gradient) {
        acc += std::norm(m.gradient(at(s, t))) * std::exp(2 * s);
      } else {
        const double us = (m.log_abs_deriv(at(s + hs / 4, t)) - m.log_abs_deriv(at(s - hs / 4, t))) /
                          (hs / 2);
        const double ut = (m.log_abs_deriv(at(s, t + ht / 4)) - m.log_abs_deriv(at(s, t - ht / 4))) /
                          (ht / 2);
        acc += us * us + ut * ut;
      }
    }
    return acc;
  });
  return total * hs * ht / kPi;
}

double grid_dirichlet(const ConformalMapSample& m, const RectDomain& d, std::size_t nx,
                      std::size_t ny) {
  require(d.x1 > d.x0 && d.y1 > d.y0, "empty rectangle");
  require(nx >= 1 && ny >= 1, "need at least one cell");
  for (cplx p : m.singular_points) {
    if (p.real() >= d.x0 && p.real() <= d.x1 && p.imag() >= d.y0 && p.imag() <= d.y1) {
      std::ostringstream os;
      os << "singular point " << p.real() << "+" << p.imag() << "i lies in the rectangle";
      fail(ErrorCode::SingularityOnGrid, os.str());
    }
  }
  const double hx = (d.x1 - d.x0) / nx, hy = (d.y1 - d.y0) / ny;
  const double total = row_sum(nx, [&](std::size_t i) {
    const double x = d.x0 + (i + 0.5) * hx;
    double acc = 0;
    for (std::size_t j = 0; j < ny; ++j) {
      const cplx z(x, d.y0 + (j + 0.5) * hy);
      if (m.gradient) {
        acc += std::norm(m.gradient(z));
      } else {
        const double ux = (m.log_abs_deriv(z + hx / 4) - m.log_abs_deriv(z - hx / 4)) / (hx / 2);
        const double uy = (m.log_abs_deriv(z + cplx(0, hy / 4)) - m.log_abs_deriv(z - cplx(0, hy / 4))) /
                          (hy / 2);
        acc += ux * ux + uy * uy;
      }
    }
    return acc;
  });
  return total * hx * hy / kPi;
}

double power_map_dirichlet(double p, double angle, double r_in, double r_out) {
  return angle * (p - 1) * (p - 1) * std::log(r_out / r_in) / kPi;
}

double c_beta(double beta) {
  require(beta > 0 && beta < 1, "beta must lie in (0, 1)");
  return (1 - 2 * beta) * (1 - 2 * beta) / (2 * beta * (1 - beta));
}

RenormalizedStudy renormalized_dirichlet(const ConformalMapSample& m, double beta, double r_in,
                                         const std::vector<double>& radii,
                                         std::size_t cells_per_decade, std::size_t n_theta,
                                         double tol) {
  require(radii.size() >= 3, "need at least three radii");
  require(std::is_sorted(radii.begin(), radii.end()) && radii.front() > r_in,
          "radii must increase and exceed r_in");
  RenormalizedStudy st;
  st.beta = beta;
  st.c_beta = c_beta(beta);
  st.radii = radii;
  const double split = 2 * beta * kPi;
  for (double R : radii) {
    const auto n_r = static_cast<std::size_t>(
        std::ceil(static_cast<double>(cells_per_decade) * std::log10(R / r_in)));
    const double d = grid_dirichlet(m, SectorDomain{r_in, R, 0, split}, n_r, n_theta) +
                     grid_dirichlet(m, SectorDomain{r_in, R, split, 2 * kPi}, n_r, n_theta);
    st.dirichlet.push_back(d);
    st.renormalized.push_back(d - st.c_beta * std::log(R));
  }
  std::vector<double> logs;
  for (double R : radii) logs.push_back(std::log(R));
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    mx += logs[i];
    my += st.dirichlet[i];
  }
  mx /= radii.size();
  my /= radii.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    sxy += (logs[i] - mx) * (st.dirichlet[i] - my);
    sxx += (logs[i] - mx) * (logs[i] - mx);
  }
  st.slope = sxy / sxx;

  // Aitken extrapolation over consecutive triples
  const auto& q = st.renormalized;
  std::vector<double> ext;
  for (std::size_t k = 2; k < q.size(); ++k) {
    const double d1 = q[k - 1] - q[k - 2], d2 = q[k] - q[k - 1];
    const double den = d2 - d1;
    ext.push_back(std::abs(den) > 1e-14 * (1 + std::abs(q[k])) ? q[k] - d2 * d2 / den : q[k]);
  }
  st.limit = ext.back();
  const double prev = ext.size() >= 2 ? ext[ext.size() - 2] : q[q.size() - 2];
  if (std::abs(st.limit - prev) > tol * (1 + std::abs(st.limit))) {
    std::ostringstream os;
    os << "renormalized energy did not settle: " << prev << " then " << st.limit;
    fail(ErrorCode::NonConvergent, os.str());
  }
  return st;
}

std::vector<IdentityCheck> theorem_identity_trivial_checks(double rho) {
  std::vector<IdentityCheck> out;
  auto add = [&](std::string name, double lhs, double rhs, double tol) {
    out.push_back({std::move(name), lhs, rhs, std::abs(lhs - rhs) <= tol});
  };

  // radial formula with gamma = gamma^0: H = id, D(h) = D(h^0)
  {
    const double v0 = kPi / 2;
    const double lhs = rho_energy_direct(make_radial_sle0(rho, v0), ForcePoint::radial(v0, rho), 1.0);
    const double d = 0.0;  // D(h) - D(h^0) for identical curves
    const double coef = (rho + 6) * (rho - 2) / 8;
    add("radial-formula-minimizer", lhs, d - coef * std::log(1.0), 1e-8);
  }
  // point coefficient against the interior integrated formula with -6 - rho
  {
    const double r = -6 - rho;
    add("radial-point-coefficient", (rho + 6) * (rho - 2) / 8, r * (8 + r) / 8, 1e-12);
    // sin-term reduction: rho - rho (8 + rho) / 8 = -rho^2 / 8
    add("radial-sin-reduction", r - r * (8 + r) / 8, -r * r / 8, 1e-12);
  }
  if (rho > -2) {
    const double x0 = 1;
    const double lhs = rho_energy_direct(make_chordal_sle0(rho, x0), ForcePoint::boundary(x0, rho), 1.0);
    const double coef = rho * (rho + 4) / 4;
    add("chordal-formula-minimizer", lhs, 0.0 - coef * std::log(1.0), 1e-8);
    // boundary integrated formula carries -rho (4 + rho) / 4 log |g'(x0)|
    add("chordal-point-coefficient", coef, rho * (4 + rho) / 4, 1e-12);
    const double alpha = (rho + 2) / (rho + 4);
    add("chordal-corner-constant", c_beta(alpha),
        (1 - 2 * alpha) * (1 - 2 * alpha) / (2 * alpha * (1 - alpha)), 1e-12);
  }
  return out;
}

}  // namespace slerho
