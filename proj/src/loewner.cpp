#include "slerho/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "slerho/error.hpp"

namespace slerho {

namespace {

const cplx I(0.0, 1.0);

// Square root in the closed upper half-plane; on the real axis the sign
// follows Re(ref).
cplx sqrt_upper(cplx w, cplx ref) {
  cplx s = std::sqrt(w);
  if (s.imag() < 0 || (s.imag() == 0 && ref.real() < 0 && s.real() > 0)) s = -s;
  return s;
}

cplx chordal_rhs(cplx g, double W) { return 2.0 / (g - W); }

cplx radial_rhs(cplx g, double w) {
  const cplx e = std::polar(1.0, w);
  return g * (e + g) / (e - g);
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::ReachedT: return "ReachedT";
    case StopReason::ForcePointApproach: return "ForcePointApproach";
    case StopReason::NumericalBlowup: return "NumericalBlowup";
  }
  return "?";
}

// ---------------------------------------------------------------------------

FlowResult flow_points(const DrivingFunction& drive, std::span<const cplx> points, double T,
                       double eps_stop, double tol) {
  require(T <= drive.horizon(), "flow time beyond the driving horizon");
  require(T >= drive.start(), "flow time before the driving start");
  const bool radial = drive.setting() == Setting::RadialDisk;
  const double t0 = drive.start();
  FlowResult out;
  out.values.resize(points.size());
  out.stop_times.resize(points.size());
  out.swallowed.assign(points.size(), false);
  std::vector<char> swallowed(points.size(), 0);

  auto rhs = [&](double t, cplx g) {
    const double w = drive(t);
    return radial ? radial_rhs(g, w) : chordal_rhs(g, w);
  };
  auto dist = [&](double t, cplx g) {
    const double w = drive(t);
    return radial ? std::abs(g - std::polar(1.0, w)) : std::abs(g - w);
  };
  auto rk4 = [&](double t, cplx g, double h) {
    const cplx k1 = rhs(t, g);
    const cplx k2 = rhs(t + h / 2, g + h / 2 * k1);
    const cplx k3 = rhs(t + h / 2, g + h / 2 * k2);
    const cplx k4 = rhs(t + h, g + h * k3);
    return g + h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  const double span = T - t0;
  const double hmin = 1e-14 * std::max(span, 1e-300);
  detail::parallel_for(points.size(), [&](std::size_t i) {
    cplx g = points[i];
    if (radial)
      require(std::abs(g) < 1, "radial flow needs points in the open unit disk");
    else
      require(g.imag() > 0 || (g.imag() == 0 && g.real() != drive(t0)),
              "chordal flow needs points in the closed upper half-plane off the driving point");
    double t = t0;
    double h = span / 64;
    while (t < T) {
      if (dist(t, g) < eps_stop) {
        swallowed[i] = 1;
        break;
      }
      h = std::min(h, T - t);
      const cplx full = rk4(t, g, h);
      const cplx half = rk4(t + h / 2, rk4(t, g, h / 2), h / 2);
      const double err = std::abs(full - half);
      const double scale = std::max(1.0, std::abs(half));
      if (!finite(half) || err > tol * scale) {
        h /= 2;
        if (h < hmin) {
          // near the driving point the flow is singular: that is a swallow
          if (dist(t, g) < std::sqrt(eps_stop)) {
            swallowed[i] = 1;
            break;
          }
          fail(ErrorCode::StepSizeUnderflow, "adaptive step fell below 1e-14 T in flow_points");
        }
        continue;
      }
      g = half + (half - full) / 15.0;
      t += h;
      if (err < tol * scale / 64) h *= 2;
    }
    out.values[i] = g;
    out.stop_times[i] = t;
  });
  for (std::size_t i = 0; i < points.size(); ++i) out.swallowed[i] = swallowed[i] != 0;
  return out;
}

// ---------------------------------------------------------------------------

double LoewnerTrack::gap(std::size_t k) const {
  if (setting == Setting::RadialDisk)
    return 2 * std::abs(std::sin((force_angle[k] - driving[k]) / 2));
  return std::abs(cplx(driving[k], 0) - force_image[k]);
}

namespace {

struct TrackState {
  cplx z;     // z_t, x_t, or v_t (real part)
  cplx logd;  // log g_t'(z0) (complex for interior)
  std::vector<double> aux;
};

struct TrackDeriv {
  cplx dz, dlog;
  std::vector<double> daux;
};

TrackDeriv track_rhs(const ForcePoint& fp, const TrackState& s, double w) {
  TrackDeriv d;
  switch (fp.kind) {
    case ForcePoint::Kind::InteriorChordal: {
      const cplx q = s.z - w;
      d.dz = 2.0 / q;
      d.dlog = -2.0 / (q * q);
      break;
    }
    case ForcePoint::Kind::BoundaryChordal: {
      const double q = s.z.real() - w;
      d.dz = 2.0 / q;
      d.dlog = -2.0 / (q * q);
      break;
    }
    case ForcePoint::Kind::BoundaryRadial: {
      const double h = (s.z.real() - w) / 2;
      const double sn = std::sin(h);
      d.dz = std::cos(h) / sn;
      d.dlog = -0.5 / (sn * sn);
      break;
    }
  }
  d.daux.resize(s.aux.size());
  for (std::size_t j = 0; j < s.aux.size(); ++j) d.daux[j] = 2.0 / (s.aux[j] - w);
  return d;
}

TrackState axpy(const TrackState& s, double h, const TrackDeriv& d) {
  TrackState r{s.z + h * d.dz, s.logd + h * d.dlog, s.aux};
  for (std::size_t j = 0; j < r.aux.size(); ++j) r.aux[j] += h * d.daux[j];
  return r;
}

double state_gap(const ForcePoint& fp, const TrackState& s, double w) {
  if (fp.kind == ForcePoint::Kind::BoundaryRadial)
    return 2 * std::abs(std::sin((s.z.real() - w) / 2));
  return std::abs(s.z - w);
}

bool state_finite(const TrackState& s) {
  if (!finite(s.z) || !finite(s.logd)) return false;
  for (double a : s.aux)
    if (!std::isfinite(a)) return false;
  return true;
}

}  // namespace

LoewnerTrack track_force_point(const DrivingFunction& drive, const ForcePoint& fp, double T,
                               const TrackOptions& opts) {
  require(drive.setting() == fp.setting(), "driving setting does not match the force point");
  require(T > drive.start(), "track end must follow the driving start");
  if (T > drive.horizon() * (1 + 1e-12) + 1e-300)
    fail(ErrorCode::OutsideHorizon, "track end beyond the driving horizon");
  T = std::min(T, drive.horizon());
  require(opts.dt > 0, "step must be positive");
  require(opts.aux_boundary.empty() || fp.setting() == Setting::ChordalHalfPlane,
          "auxiliary boundary points are chordal only");

  LoewnerTrack tr;
  tr.setting = fp.setting();
  tr.fp = fp;
  tr.aux.resize(opts.aux_boundary.size());

  const double t0 = drive.start();
  TrackState s;
  s.z = fp.kind == ForcePoint::Kind::BoundaryRadial ? cplx(fp.v0, 0) : fp.location;
  s.logd = 0;
  s.aux = opts.aux_boundary;

  const double gap0 = state_gap(fp, s, drive(t0));
  require(gap0 > 0, "force point coincides with the driving point");
  const double eps = opts.eps_stop_rel * gap0;
  const double hmin = opts.min_step_rel * (T - t0);

  auto record = [&](double t, const TrackState& st, double w) {
    tr.times.push_back(t);
    tr.driving.push_back(w);
    tr.driving_rate.push_back(drive.derivative(t));
    if (fp.kind == ForcePoint::Kind::BoundaryRadial) {
      tr.force_angle.push_back(st.z.real());
      tr.force_image.push_back(std::polar(1.0, st.z.real()));
    } else {
      tr.force_image.push_back(fp.kind == ForcePoint::Kind::BoundaryChordal
                                   ? cplx(st.z.real(), 0)
                                   : st.z);
    }
    tr.log_deriv.push_back(st.logd.real());
    if (fp.kind == ForcePoint::Kind::InteriorChordal) tr.theta.push_back(std::arg(st.z - w));
    for (std::size_t j = 0; j < st.aux.size(); ++j) tr.aux[j].push_back(st.aux[j]);
  };

  // knot-aligned breakpoints
  std::vector<double> breaks;
  for (double k : drive.knots())
    if (k > t0 && k < T) breaks.push_back(k);
  for (double k : opts.breakpoints)
    if (k > t0 && k < T) breaks.push_back(k);
  std::sort(breaks.begin(), breaks.end());
  std::size_t next_break = 0;

  double t = t0;
  double w = drive(t0);
  record(t, s, w);
  double h_try = opts.dt;
  while (t < T) {
    const double gap = state_gap(fp, s, w);
    if (gap < eps) {
      tr.stop = StopReason::ForcePointApproach;
      tr.stop_lo = t;
      tr.stop_hi = std::min(T, t + h_try);
      return tr;
    }
    while (next_break < breaks.size() && breaks[next_break] <= t * (1 + 1e-15)) ++next_break;
    double limit = T;
    if (next_break < breaks.size()) limit = std::min(limit, breaks[next_break]);
    double h = std::min({opts.dt, h_try * 2, limit - t});
    if (limit - t - h < 1e-12 * opts.dt) h = limit - t;
    for (;;) {
      const double wm = drive(t + h / 2), w1 = drive(t + h);
      const TrackDeriv k1 = track_rhs(fp, s, w);
      const TrackDeriv k2 = track_rhs(fp, axpy(s, h / 2, k1), wm);
      const TrackDeriv k3 = track_rhs(fp, axpy(s, h / 2, k2), wm);
      const TrackDeriv k4 = track_rhs(fp, axpy(s, h, k3), w1);
      TrackState n = s;
      n.z += h / 6 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);
      n.logd += h / 6 * (k1.dlog + 2.0 * k2.dlog + 2.0 * k3.dlog + k4.dlog);
      for (std::size_t j = 0; j < n.aux.size(); ++j)
        n.aux[j] += h / 6 * (k1.daux[j] + 2 * k2.daux[j] + 2 * k3.daux[j] + k4.daux[j]);
      const double ngap = state_finite(n) ? state_gap(fp, n, w1) : 0.0;
      bool ok = state_finite(n) && ngap >= (1 - opts.max_gap_shrink) * gap &&
                std::abs(w1 - w) <= opts.max_dw_gap * gap;
      if (fp.kind == ForcePoint::Kind::InteriorChordal && ok) ok = n.z.imag() > 0;
      if (ok) {
        s = std::move(n);
        t = (h == limit - t) ? limit : t + h;
        w = w1;
        h_try = h;
        record(t, s, w);
        break;
      }
      h /= 2;
      if (h < hmin) {
        if (gap < std::sqrt(eps * gap0)) {
          tr.stop = StopReason::ForcePointApproach;
          tr.stop_lo = t;
          tr.stop_hi = t + 2 * h;
          return tr;
        }
        if (!state_finite(n)) {
          tr.stop = StopReason::NumericalBlowup;
          tr.stop_lo = t;
          tr.stop_hi = t + 2 * h;
          return tr;
        }
        std::ostringstream os;
        os << "step fell below " << hmin << " at t=" << t << " (gap " << gap << ")";
        fail(ErrorCode::StepSizeUnderflow, os.str());
      }
    }
  }
  tr.stop = StopReason::ReachedT;
  tr.stop_lo = tr.stop_hi = t;
  return tr;
}

void require_complete(const LoewnerTrack& track) {
  if (track.stop == StopReason::ForcePointApproach) {
    std::ostringstream os;
    os << "force point reached within [" << track.stop_lo << ", " << track.stop_hi << "]";
    fail(ErrorCode::ForcePointApproach, os.str());
  }
  if (track.stop == StopReason::NumericalBlowup)
    fail(ErrorCode::NumericalBlowup, "force-point flow blew up");
}

// ---------------------------------------------------------------------------

namespace slit {

cplx chordal_forward(cplx z, double c, double dt) {
  const cplx u = z - c;
  return c + sqrt_upper(u * u + 4 * dt, u);
}

cplx chordal_inverse(cplx w, double c, double dt) {
  const cplx u = w - c;
  return c + sqrt_upper(u * u - 4 * dt, u);
}

namespace {
struct RadialConsts {
  double y2, y, b;
};
RadialConsts radial_consts(double dt) {
  const double y2 = -std::expm1(-dt);
  return {y2, std::sqrt(y2), std::exp(-dt / 2)};
}
}  // namespace

cplx radial_forward(cplx z, double c, double dt) {
  const auto k = radial_consts(dt);
  const cplx rot = std::polar(1.0, c);
  const cplx zz = z / rot;
  const cplx zeta = I * (1.0 - zz) / (1.0 + zz);
  const cplx G = sqrt_upper(zeta * zeta + k.y2, zeta);
  return rot * (I * k.b - G) / (I * k.b + G);
}

cplx radial_inverse(cplx w, double c, double dt) {
  const auto k = radial_consts(dt);
  const cplx rot = std::polar(1.0, c);
  const cplx u = w / rot;
  const cplx zeta = I * k.b * (1.0 - u) / (1.0 + u);
  const cplx G = sqrt_upper(zeta * zeta - k.y2, zeta);
  return rot * (I - G) / (I + G);
}

cplx radial_tip(double c, double dt) {
  const auto k = radial_consts(dt);
  return std::polar((1 - k.y) / (1 + k.y), c);
}

}  // namespace slit

Curve trace_on_grid(const DrivingFunction& drive, std::span<const double> times) {
  require(times.size() >= 2, "trace needs at least one step");
  for (std::size_t k = 1; k < times.size(); ++k)
    require(times[k] > times[k - 1], "trace grid must be increasing");
  const bool radial = drive.setting() == Setting::RadialDisk;
  const std::size_t n = times.size() - 1;
  std::vector<double> c(n + 1), dt(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) c[k] = drive(times[k]);
  for (std::size_t k = 1; k <= n; ++k) dt[k] = times[k] - times[k - 1];

  Curve out;
  out.points.resize(n + 1);
  out.params.assign(times.begin(), times.end());
  out.parametrization = radial ? Parametrization::ConformalRadius
                               : Parametrization::HalfPlaneCapacity;
  out.domain = radial ? Domain::Disk : Domain::HalfPlane;
  out.points[0] = radial ? std::polar(1.0, c[0]) : cplx(c[0], 0);
  detail::parallel_for(
      n,
      [&](std::size_t i) {
        const std::size_t k = i + 1;
        cplx z = radial ? slit::radial_tip(c[k], dt[k]) : c[k] + 2.0 * I * std::sqrt(dt[k]);
        for (std::size_t j = k - 1; j >= 1; --j)
          z = radial ? slit::radial_inverse(z, c[j], dt[j]) : slit::chordal_inverse(z, c[j], dt[j]);
        out.points[k] = z;
      },
      256);
  for (const cplx& z : out.points)
    if (!finite(z)) fail(ErrorCode::NumericalBlowup, "trace produced a non-finite point");
  return out;
}

Curve trace(const DrivingFunction& drive, std::size_t n_steps, double T, const TraceOptions& opts) {
  require(n_steps >= 1, "trace needs at least one step");
  if (T > drive.horizon() * (1 + 1e-12) + 1e-300)
    fail(ErrorCode::OutsideHorizon, "trace end beyond the driving horizon");
  T = std::min(T, drive.horizon());
  const double a = drive.start();
  require(T > a, "trace end must follow the driving start");
  std::vector<double> grid(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(n_steps);
    double f = u;
    if (opts.grid == TraceGrid::SqrtUniform) f = u * u;
    if (opts.grid == TraceGrid::SqrtEnd) f = 1 - (1 - u) * (1 - u);
    if (opts.grid == TraceGrid::GeometricEnd) f = -std::expm1(u * std::log(1e-12));
    grid[k] = k == n_steps ? T : a + (T - a) * f;
  }
  if (opts.max_refine > 0) {
    std::vector<double> fine{grid[0]};
    for (std::size_t k = 1; k < grid.size(); ++k) {
      // split [lo, hi] dyadically while the driving moves too much
      struct Piece {
        double lo, hi;
        int depth;
      };
      std::vector<Piece> stack{{grid[k - 1], grid[k], 0}};
      std::vector<double> pts;
      while (!stack.empty()) {
        Piece p = stack.back();
        stack.pop_back();
        const double dw = std::abs(drive(p.hi) - drive(p.lo));
        if (p.depth < opts.max_refine && dw > 0.05 * std::sqrt(p.hi - p.lo)) {
          const double mid = (p.lo + p.hi) / 2;
          stack.push_back({mid, p.hi, p.depth + 1});
          stack.push_back({p.lo, mid, p.depth + 1});
        } else {
          pts.push_back(p.hi);
        }
      }
      fine.insert(fine.end(), pts.begin(), pts.end());
    }
    grid = std::move(fine);
  }
  return trace_on_grid(drive, grid);
}

// ---------------------------------------------------------------------------

double wholeplane_self_intersection_x(double rho, double y0) {
  require(rho > -4 && rho < -2, "self-intersection only occurs for rho in (-4, -2)");
  return y0 / std::tan(kPi * (4 + rho) / 4);
}

Curve trace_wholeplane(const WholePlaneParams& p) {
  require(p.rho <= -2, "whole-plane SLE0(rho) needs rho <= -2");
  require(p.n >= 2 && p.y0 > 0 && p.span > 1, "invalid whole-plane sampling parameters");
  Curve out;
  out.parametrization = Parametrization::Unknown;
  out.domain = Domain::Plane;
  const double sgn = p.orientation == Orientation::Positive ? 1.0 : -1.0;
  const cplx rot = std::polar(1.0, p.theta);
  auto emit = [&](cplx eta, double param) {
    if (sgn < 0) eta = std::conj(eta);
    eta *= rot;
    out.points.push_back(p.inverted ? 1.0 / eta : eta);
    out.params.push_back(param);
  };
  if (p.rho == -2.0) {
    require(p.v0 > 0 && p.v0 < 2 * kPi, "v0 must lie in (0, 2pi)");
    const double C = 1.5 * kPi - p.v0 / 2;
    const cplx e = std::polar(1.0, C);
    const double L = std::log(p.span);
    const double c = std::abs(e.real());
    require(c > 1e-12, "circular flow-lines do not form a whole-plane curve");
    const double tau = L / c;
    for (std::size_t k = 0; k <= p.n; ++k) {
      const double s = -tau + 2 * tau * static_cast<double>(k) / static_cast<double>(p.n);
      emit(p.y0 * std::exp(e * s), s);
    }
    return out;
  }
  const double pw = -4 / (2 + p.rho);
  const double a_start = std::atan2(1.0, p.span);
  const double a_end = kPi * (4 + p.rho) / 4;
  // for rho in (-4,-2) the loop closes where arg(x + i y0) = pi - alpha_1
  const double a_stop = p.rho <= -4 || !p.cut_loop ? kPi - a_start : kPi - a_end;
  for (std::size_t k = 0; k <= p.n; ++k) {
    const double a = a_start + (a_stop - a_start) * static_cast<double>(k) / static_cast<double>(p.n);
    const cplx base = std::polar(p.y0 / std::sin(a), a);  // x + i y0
    emit(std::pow(base, pw), a);
  }
  return out;
}

Curve trace_wholeplane_loewner(double rho, Orientation orientation, double theta, double T,
                               std::size_t n, bool inverted, double window,
                               std::optional<double> v0) {
  const double t_min = T - window;
  const DrivingFunction w = make_wholeplane_sle0(rho, theta, T, orientation, v0, t_min);
  // the driving has a square-root singularity at T; cluster the grid there
  std::vector<double> grid(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(n);
    grid[k] = k == n ? T : T - window * (1 - u) * (1 - u);
  }
  if (rho == -2.0)
    for (std::size_t k = 0; k <= n; ++k) grid[k] = t_min + window * static_cast<double>(k) / n;
  Curve radial = trace_on_grid(w, grid);
  const double scale = std::exp(-t_min);
  Curve out;
  out.domain = Domain::Plane;
  out.parametrization = Parametrization::ConformalRadius;
  out.params = radial.params;
  for (cplx u : radial.points) out.points.push_back(inverted ? 1.0 / (scale * u) : scale * u);
  return out;
}

}  // namespace slerho
