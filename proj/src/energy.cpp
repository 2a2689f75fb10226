#include "slerho/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slerho/error.hpp"

namespace slerho {

namespace {

double drift(const LoewnerTrack& tr, std::size_t k) {
  const double rho = tr.fp.rho;
  switch (tr.fp.kind) {
    case ForcePoint::Kind::InteriorChordal:
      return rho * (1.0 / (cplx(tr.driving[k], 0) - tr.force_image[k])).real();
    case ForcePoint::Kind::BoundaryChordal:
      return rho / (tr.driving[k] - tr.force_image[k].real());
    case ForcePoint::Kind::BoundaryRadial:
      return rho / 2 / std::tan((tr.driving[k] - tr.force_angle[k]) / 2);
  }
  return 0;
}

template <class F>
std::vector<double> cumulative(const LoewnerTrack& tr, F integrand) {
  std::vector<double> out(tr.size(), 0.0);
  double prev = integrand(0);
  for (std::size_t k = 1; k < tr.size(); ++k) {
    const double cur = integrand(k);
    out[k] = out[k - 1] + 0.25 * (tr.times[k] - tr.times[k - 1]) * (prev + cur);
    prev = cur;
  }
  return out;
}

double sqr(double x) { return x * x; }

// 1/2 int f'^2 on [start, T]. Sampled drives have a piecewise-linear
// derivative, integrated exactly between knots.
double dirichlet_half(const DrivingFunction& f, double T) {
  if (f.is_sampled()) {
    std::vector<double> t;
    for (double k : f.knots())
      if (k < T) t.push_back(k);
    t.push_back(T);
    double s = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double a = f.derivative(t[i - 1]), b = f.derivative(t[i]);
      s += (t[i] - t[i - 1]) * (a * a + a * b + b * b) / 3;
    }
    return s / 2;
  }
  const std::size_t n = 4096;
  const double h = (T - f.start()) / n;
  double s = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * sqr(f.derivative(f.start() + i * h));
  }
  return s * h / 6;
}

// `err` is the pointwise numerical error of `value`: the gap between the
// direct energy and the integrated formula at the same time.
Certificate sandwich(std::string name, const std::vector<double>& lower,
                     const std::vector<double>& value, const std::vector<double>& upper,
                     const std::vector<double>& err) {
  Certificate c;
  c.name = std::move(name);
  for (std::size_t k = 0; k < value.size(); ++k) {
    const double lo = lower.empty() ? -kInf : lower[k];
    const double hi = upper.empty() ? kInf : upper[k];
    double scale = 1 + std::abs(value[k]);
    if (std::isfinite(lo)) scale += std::abs(lo);
    if (std::isfinite(hi)) scale += std::abs(hi);
    const double slack = std::min(value[k] - lo, hi - value[k]);
    c.margin = std::min(c.margin, slack);
    if (slack < -(1e-8 * scale + err[k])) c.ok = false;
  }
  c.lower = lower.empty() ? -kInf : lower.back();
  c.upper = upper.empty() ? kInf : upper.back();
  c.value = value.back();
  return c;
}

Certificate skipped(std::string name, std::string why) {
  Certificate c;
  c.name = std::move(name);
  c.applicable = false;
  c.note = std::move(why);
  return c;
}

std::vector<Certificate> certificates_for(const LoewnerTrack& tr) {
  std::vector<Certificate> out;
  const double rho = tr.fp.rho;
  const auto I = cumulative_direct_energy(tr);
  const auto A = cumulative_base_energy(tr);
  const std::size_t n = tr.size();

  if (tr.fp.kind == ForcePoint::Kind::InteriorChordal) {
    const double s0 = std::sin(tr.theta[0]);
    const double y0 = tr.force_image[0].imag();
    if (rho < -4) {
      const double q = -(4 + rho) / 4;
      const double M = std::max(1.0, q), m = std::min(1.0, q);
      std::vector<double> lo(n), hi(n), D(n), Dlo(n), Dhi(n, 0.0), err(n), none(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const double ls = std::log(std::sin(tr.theta[k]) / s0);
        lo[k] = m * (m * A[k] + rho * ls);
        hi[k] = M * (M * A[k] + rho * ls);
        D[k] = tr.log_deriv[k] + std::log(tr.y(k) / y0);
        Dlo[k] = 2 * ls - A[k] / 2;
        err[k] = std::abs(I[k] - (A[k] + rho * ls - rho * (8 + rho) / 8 * D[k]));
      }
      out.push_back(sandwich("interior-sandwich", lo, I, hi, err));
      // D comes from the ODE accumulators; A carries the quadrature error
      out.push_back(sandwich("interior-log-derivative", Dlo, D, Dhi, none));
    } else {
      out.push_back(skipped("interior-sandwich", "needs rho < -4"));
    }
    Certificate diag;
    diag.name = "final-sin-theta";
    diag.value = std::sin(tr.theta.back());
    diag.lower = 0;
    diag.upper = 1;
    diag.note = "diagnostic; tends to 0 for finite-energy curves ending at z0 (rho < -4)";
    out.push_back(diag);
    return out;
  }

  if (tr.fp.kind == ForcePoint::Kind::BoundaryChordal) {
    if (!(rho > -2)) {
      out.push_back(skipped("boundary-sandwich", "needs rho > -2"));
      out.push_back(skipped("welding", "needs rho > -2"));
      return out;
    }
    const double m = (rho + 2) / 2;
    const double M = std::max(m, 1.0), mm = std::min(m, 1.0);
    const double gap0 = tr.gap(0);
    std::vector<double> lo(n), hi(n), err(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double L = std::log(tr.gap(k) / gap0);
      hi[k] = M * (M * A[k] + std::abs(rho) * L);
      lo[k] = mm * (mm * A[k] - std::abs(rho) * L);
      err[k] = std::abs(I[k] - (A[k] - rho * L - rho * (4 + rho) / 4 * tr.log_deriv[k]));
    }
    out.push_back(sandwich("boundary-sandwich", lo, I, hi, err));

    const double x0 = tr.force_image[0].real();
    if (tr.aux.empty() || std::abs(tr.aux[0][0] + 2 * x0 / (2 + rho)) > 1e-12 * std::abs(x0)) {
      out.push_back(skipped("welding", "track lacks the auxiliary point y0"));
      return out;
    }
    std::vector<double> b(n);
    const auto r = [&](std::size_t k) {
      const double y = tr.aux[0][k];
      return (tr.driving[k] - y) / (tr.force_image[k].real() - y);
    };
    const double r0 = r(0);
    for (std::size_t k = 0; k < n; ++k) {
      const double rk = r(k);
      b[k] = -(2 + rho) * std::log((1 - rk) / (1 - r0)) - 2 * std::log(rk / r0);
    }
    Certificate w = sandwich("welding", b, I, {}, err);
    std::ostringstream os;
    os.precision(12);
    os << "r_T=" << r(n - 1) << " r_0=" << r0;
    w.note = os.str();
    out.push_back(w);
    return out;
  }

  out.push_back(skipped("boundary-sandwich", "radial setting"));
  return out;
}

}  // namespace

bool passes_absolute_continuity(const DrivingFunction& drive, double T) {
  if (drive.has_analytic_derivative() && !drive.is_sampled()) return true;
  std::vector<double> t;
  if (drive.is_sampled()) {
    for (double k : drive.knots())
      if (k <= T) t.push_back(k);
  } else {
    const std::size_t n = 4096;
    for (std::size_t i = 0; i <= n; ++i)
      t.push_back(drive.start() + (T - drive.start()) * static_cast<double>(i) / n);
  }
  if (t.size() < 9) return true;
  std::vector<double> w(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) w[i] = drive(t[i]);
  auto energy = [&](std::size_t stride) {
    double s = 0;
    std::size_t i = 0;
    for (; i + stride < t.size(); i += stride) s += sqr(w[i + stride] - w[i]) / (t[i + stride] - t[i]);
    return s / 2;
  };
  const double e1 = energy(1), e2 = energy(2), e4 = energy(4);
  if (e4 <= 0) return e1 <= 0;
  return !(e1 > 1.5 * e2 && e2 > 1.5 * e4);
}

std::vector<double> cumulative_direct_energy(const LoewnerTrack& tr) {
  return cumulative(tr, [&](std::size_t k) { return sqr(tr.driving_rate[k] - drift(tr, k)); });
}

std::vector<double> cumulative_base_energy(const LoewnerTrack& tr) {
  return cumulative(tr, [&](std::size_t k) { return sqr(tr.driving_rate[k]); });
}

double rho_energy_direct(const DrivingFunction& drive, const ForcePoint& fp, double T,
                         const EnergyOptions& opts) {
  if (opts.check_absolute_continuity && !passes_absolute_continuity(drive, T)) return kInf;
  const LoewnerTrack tr = track_force_point(drive, fp, T, opts.track);
  require_complete(tr);
  return cumulative_direct_energy(tr).back();
}

EnergyReport energy_report(const LoewnerTrack& tr) {
  require_complete(tr);
  EnergyReport r;
  const double rho = tr.fp.rho;
  const std::size_t e = tr.size() - 1;
  r.direct = cumulative_direct_energy(tr).back();
  r.base_energy = cumulative_base_energy(tr).back();
  r.final_time = tr.final_time();
  r.steps = e;
  switch (tr.fp.kind) {
    case ForcePoint::Kind::InteriorChordal: {
      r.log_sin_term = rho * std::log(std::sin(tr.theta[e]) / std::sin(tr.theta[0]));
      r.log_deriv_term = -(rho * (8 + rho) / 8) *
                         (tr.log_deriv[e] + std::log(tr.y(e) / tr.y(0)));
      break;
    }
    case ForcePoint::Kind::BoundaryChordal:
      r.log_gap_term = -rho * std::log(tr.gap(e) / tr.gap(0));
      r.log_deriv_term = -(rho * (4 + rho) / 4) * tr.log_deriv[e];
      break;
    case ForcePoint::Kind::BoundaryRadial:
      r.log_gap_term = -rho * std::log(tr.gap(e) / tr.gap(0));
      r.log_deriv_term =
          -(rho * (4 + rho) / 8) * (2 * tr.log_deriv[e] + (tr.times[e] - tr.times[0]));
      break;
  }
  r.integrated = r.base_energy + r.log_sin_term + r.log_deriv_term + r.log_gap_term;
  r.discrepancy = std::abs(r.direct - r.integrated);
  r.certificates = certificates_for(tr);
  return r;
}

EnergyReport rho_energy_integrated(const DrivingFunction& drive, const ForcePoint& fp, double T,
                                   const EnergyOptions& opts) {
  if (opts.check_absolute_continuity && !passes_absolute_continuity(drive, T)) {
    EnergyReport r;
    r.direct = r.integrated = r.base_energy = kInf;
    r.infinite = true;
    r.final_time = T;
    return r;
  }
  TrackOptions topts = opts.track;
  if (fp.kind == ForcePoint::Kind::BoundaryChordal && fp.rho > -2 && topts.aux_boundary.empty())
    topts = welding_track_options(fp.rho, fp.x0(), topts);
  return energy_report(track_force_point(drive, fp, T, topts));
}

double min_energy_through_point(cplx z0) {
  require(z0.imag() > 0, "point must lie in the upper half-plane");
  return -8 * std::log(std::sin(std::arg(z0)));
}

// ---------------------------------------------------------------------------

cplx chordal_swap_map(cplx z, double x0) { return x0 * z / (x0 - z); }

cplx radial_to_chordal_map(cplx z, double v0) {
  const cplx e = std::polar(1.0, v0);
  return -std::polar(1.0, v0 / 2) * (z - 1.0) / (z - e);
}

cplx disk_to_halfplane(cplx z) { return cplx(0, 1) * (1.0 - z) / (1.0 + z); }

namespace {

Curve mapped(const Curve& c, Domain d, auto f) {
  Curve out;
  out.domain = d;
  out.parametrization = Parametrization::Unknown;
  out.points.reserve(c.points.size());
  for (cplx z : c.points) out.points.push_back(f(z));
  // the boundary start must be exact for the zipper
  if (d == Domain::HalfPlane) out.points[0] = cplx(out.points[0].real(), 0);
  return out;
}

}  // namespace

CoordinateChange coordinate_change_chordal(const Curve& curve, double rho, double x0,
                                           const ZipperOptions& zopts, const EnergyOptions& eopts) {
  require(x0 != 0, "force point must be nonzero");
  const ZipperResult a = extract_driving(curve, Setting::ChordalHalfPlane, zopts);
  const Curve img = mapped(curve, Domain::HalfPlane, [&](cplx z) { return chordal_swap_map(z, x0); });
  const ZipperResult b = extract_driving(img, Setting::ChordalHalfPlane, zopts);
  CoordinateChange c;
  c.lhs = rho_energy_direct(a.drive, ForcePoint::boundary(x0 + a.drive(0), rho),
                            a.capacity_times.back(), eopts);
  c.rhs = rho_energy_direct(b.drive, ForcePoint::boundary(-x0 + b.drive(0), -6 - rho),
                            b.capacity_times.back(), eopts);
  c.discrepancy = std::abs(c.lhs - c.rhs);
  c.residual_lhs = a.residual;
  c.residual_rhs = b.residual;
  return c;
}

CoordinateChange coordinate_change_radial(const Curve& curve, double rho, double v0,
                                          const ZipperOptions& zopts, const EnergyOptions& eopts) {
  require(v0 > 0 && v0 < 2 * kPi, "force-point angle must lie in (0, 2 pi)");
  const ZipperResult a = extract_driving(curve, Setting::RadialDisk, zopts);
  const Curve img =
      mapped(curve, Domain::HalfPlane, [&](cplx z) { return radial_to_chordal_map(z, v0); });
  const ZipperResult b = extract_driving(img, Setting::ChordalHalfPlane, zopts);
  const cplx zc = std::polar(1.0, kPi - v0 / 2);
  CoordinateChange c;
  c.lhs = rho_energy_direct(a.drive, ForcePoint::radial(v0 + a.drive(0), rho),
                            a.capacity_times.back(), eopts);
  c.rhs = rho_energy_direct(b.drive, ForcePoint::interior(zc + b.drive(0), -6 - rho),
                            b.capacity_times.back(), eopts);
  c.discrepancy = std::abs(c.lhs - c.rhs);
  c.residual_lhs = a.residual;
  c.residual_rhs = b.residual;
  return c;
}

// ---------------------------------------------------------------------------

TrackOptions welding_track_options(double rho, double x0, TrackOptions base) {
  require(rho > -2, "welding bound needs rho > -2");
  base.aux_boundary.insert(base.aux_boundary.begin(), -2 * x0 / (2 + rho));
  return base;
}

WeldingBound welding_lower_bound(const LoewnerTrack& tr, double rho, double x0) {
  require(tr.fp.kind == ForcePoint::Kind::BoundaryChordal, "welding bound needs a boundary track");
  require(!tr.aux.empty(), "track lacks the auxiliary point y0");
  const double y0 = -2 * x0 / (2 + rho);
  require(std::abs(tr.aux[0][0] - y0) <= 1e-12 * std::abs(y0), "first auxiliary point is not y0");
  auto r = [&](std::size_t k) {
    const double y = tr.aux[0][k];
    return (tr.driving[k] - y) / (tr.force_image[k].real() - y);
  };
  WeldingBound w;
  w.r_0 = r(0);
  w.r_T = r(tr.size() - 1);
  w.bound = -(2 + rho) * std::log((1 - w.r_T) / (1 - w.r_0)) - 2 * std::log(w.r_T / w.r_0);
  return w;
}

std::vector<Certificate> bound_certificates(const DrivingFunction& drive, const ForcePoint& fp,
                                            double T, const EnergyOptions& opts) {
  return rho_energy_integrated(drive, fp, T, opts).certificates;
}

Certificate chordal_radial_certificate(const Curve& disk_curve, const ZipperOptions& zopts,
                                       const EnergyOptions& eopts) {
  const ZipperResult rad = extract_driving(disk_curve, Setting::RadialDisk, zopts);
  const double IR = dirichlet_half(rad.drive, rad.capacity_times.back());

  const Curve img = mapped(disk_curve, Domain::HalfPlane, disk_to_halfplane);
  const ZipperResult ch = extract_driving(img, Setting::ChordalHalfPlane, zopts);
  const LoewnerTrack tr =
      track_force_point(ch.drive, ForcePoint::interior(cplx(ch.drive(0), 1), -6),
                        ch.capacity_times.back(), eopts.track);
  require_complete(tr);
  const double IC = cumulative_base_energy(tr).back();
  const double ls = std::log(std::sin(tr.theta.back()));

  Certificate c = sandwich("chordal-radial", {IC / 4 - 3 * ls}, {IR}, {IC - 6 * ls}, {0.0});
  std::ostringstream os;
  os.precision(12);
  os << "I^C=" << IC << " sin_theta_T=" << std::sin(tr.theta.back());
  c.note = os.str();
  return c;
}

double energy_additivity_check(const DrivingFunction& drive, const ForcePoint& fp, double T,
                               double t_split, const EnergyOptions& opts) {
  require(t_split > drive.start() && t_split < T, "split time must lie inside (start, T)");
  TrackOptions topts = opts.track;
  topts.breakpoints.push_back(t_split);
  const LoewnerTrack tr = track_force_point(drive, fp, T, topts);
  require_complete(tr);
  const auto I = cumulative_direct_energy(tr);
  const auto it = std::lower_bound(tr.times.begin(), tr.times.end(), t_split * (1 - 1e-14));
  const std::size_t k = static_cast<std::size_t>(it - tr.times.begin());
  require(k < tr.size() && std::abs(tr.times[k] - t_split) <= 1e-12 * T,
          "track did not land on the split time");

  ForcePoint rest = fp;
  switch (fp.kind) {
    case ForcePoint::Kind::InteriorChordal:
      rest = ForcePoint::interior(tr.force_image[k] - tr.driving[k], fp.rho);
      break;
    case ForcePoint::Kind::BoundaryChordal:
      rest = ForcePoint::boundary(tr.force_image[k].real() - tr.driving[k], fp.rho);
      break;
    case ForcePoint::Kind::BoundaryRadial: {
      double v = std::fmod(tr.force_angle[k] - tr.driving[k], 2 * kPi);
      if (v <= 0) v += 2 * kPi;
      rest = ForcePoint::radial(v, fp.rho);
      break;
    }
  }
  EnergyOptions ropts = opts;
  ropts.check_absolute_continuity = false;
  const double tail = rho_energy_direct(drive.shifted(t_split), rest, T - t_split, ropts);
  return std::abs(I.back() - I[k] - tail);
}

}  // namespace slerho
