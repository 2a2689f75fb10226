#include "slerho/flowline.hpp"

#include <algorithm>
#include <sstream>

#include "slerho/error.hpp"

namespace slerho {

FlowField FlowField::boundary(double rho, double x0) {
  require(std::isfinite(x0) && x0 != 0, "boundary force point must be a nonzero real");
  return {Kind::BoundaryChordal, rho, cplx(x0, 0), 0};
}

FlowField FlowField::interior(double rho, cplx z0) {
  require(z0.imag() > 0, "interior force point must lie in the upper half-plane");
  return {Kind::InteriorChordal, rho, z0, 0};
}

FlowField FlowField::wholeplane(double rho) {
  require(rho < -2, "whole-plane power-map field needs rho < -2");
  return {Kind::WholePlane, rho, cplx(0, 0), 0};
}

FlowField FlowField::wholeplane_minus2(double v0) {
  require(v0 > 0 && v0 < 2 * kPi, "v0 must lie in (0, 2 pi)");
  return {Kind::WholePlaneMinus2, -2, cplx(0, 0), 1.5 * kPi - v0 / 2};
}

std::string to_string(FlowStop s) {
  switch (s) {
    case FlowStop::MaxSteps: return "max-steps";
    case FlowStop::MaxLength: return "max-length";
    case FlowStop::LeftDomain: return "left-domain";
    case FlowStop::ReachedSingularity: return "reached-singularity";
  }
  return "?";
}

namespace {

double lift(double prev, double principal, const char* what) {
  if (std::isnan(prev)) return principal;
  const double d = std::remainder(principal - prev, 2 * kPi);
  if (std::abs(d) > kPi / 2) {
    std::ostringstream os;
    os << "lifted " << what << " jumped by " << d;
    fail(ErrorCode::BranchJump, os.str());
  }
  return prev + d;
}

}  // namespace

FieldValue field_eval(const FlowField& f, cplx z, const BranchState& b) {
  FieldValue v{0, b};
  switch (f.kind) {
    case FlowField::Kind::BoundaryChordal: {
      const double x0 = f.force.real();
      v.branch.arg_z = lift(b.arg_z, std::arg(z), "arg z");
      v.branch.arg_force = lift(b.arg_force, std::arg(z - x0), "arg(z - x0)");
      const double base = x0 > 0 ? kPi * (1 + f.rho / 2) : kPi;
      v.angle = base - v.branch.arg_z - f.rho / 2 * v.branch.arg_force;
      break;
    }
    case FlowField::Kind::InteriorChordal: {
      const cplx z0 = f.force;
      v.branch.arg_z = lift(b.arg_z, std::arg(z), "arg z");
      double a = std::arg(z - z0);
      if (std::isnan(b.arg_force)) {
        const double base = std::arg(z0) + kPi;
        a = base + std::remainder(a - base, 2 * kPi);
      }
      v.branch.arg_force = lift(b.arg_force, a, "arg(z - z0)");
      v.angle = kPi - v.branch.arg_z -
                f.rho / 4 * (v.branch.arg_force + std::arg(z - std::conj(z0)));
      break;
    }
    case FlowField::Kind::WholePlane:
      v.branch.arg_z = lift(b.arg_z, std::arg(z), "arg z");
      v.angle = (6 + f.rho) / 4 * v.branch.arg_z + kPi;
      break;
    case FlowField::Kind::WholePlaneMinus2:
      v.branch.arg_z = lift(b.arg_z, std::arg(z), "arg z");
      v.angle = v.branch.arg_z + f.constant;
      break;
  }
  return v;
}

cplx boundary_flowline_start(double x0) { return cplx(0, 1e-4 * std::abs(x0)); }

Flowline integrate_flowline(const FlowField& f, cplx start, const FlowlineOptions& opts,
                            const BranchState& branch) {
  require(opts.ds > 0, "step must be positive");
  if (f.in_upper_half_plane()) require(start.imag() > 0, "start must lie in the upper half-plane");
  const double scale = f.has_force_singularity() ? std::abs(f.force) : std::abs(start);
  require(scale > 0, "start must differ from the origin");
  const double stop = opts.stop_rel * scale;

  auto dist = [&](cplx z) {
    double d = std::abs(z);
    if (f.has_force_singularity()) d = std::min(d, std::abs(z - f.force));
    return d;
  };
  auto dist_force = [&](cplx z) {
    return f.has_force_singularity() ? std::abs(z - f.force) : std::abs(z);
  };

  Flowline out;
  out.curve.parametrization = Parametrization::ArcLength;
  out.curve.domain = f.in_upper_half_plane() ? Domain::HalfPlane : Domain::Plane;
  cplx z = start;
  FieldValue cur = field_eval(f, z, branch);
  double s = 0;
  out.curve.points.push_back(z);
  out.curve.params.push_back(0);

  for (std::size_t step = 0;; ++step) {
    if (step >= opts.max_steps) {
      out.stop = FlowStop::MaxSteps;
      break;
    }
    if (s >= opts.max_length) {
      out.stop = FlowStop::MaxLength;
      break;
    }
    if (dist_force(z) < stop || std::abs(z) < stop) {
      out.stop = FlowStop::ReachedSingularity;
      break;
    }
    const double h = std::min({opts.ds, opts.singular_fraction * dist(z), opts.max_length - s});
    auto dir = [&](cplx p) { return std::polar(1.0, field_eval(f, p, cur.branch).angle); };
    const cplx k1 = std::polar(1.0, cur.angle);
    const cplx k2 = dir(z + h / 2 * k1);
    const cplx k3 = dir(z + h / 2 * k2);
    const cplx k4 = dir(z + h * k3);
    const cplx next = z + h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (f.in_upper_half_plane() && !(next.imag() > 0)) {
      out.stop = FlowStop::LeftDomain;
      break;
    }
    cur = field_eval(f, next, cur.branch);
    z = next;
    s += h;
    out.curve.points.push_back(z);
    out.curve.params.push_back(s);
  }
  out.branch = cur.branch;
  return out;
}

double curve_distance(const Curve& a, const Curve& b) { return hausdorff(a, b); }

Curve truncate_near(const Curve& c, cplx p) {
  require(c.size() > 0, "empty curve");
  std::size_t best = 0;
  double bd = kInf;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double d = std::abs(c.points[k] - p);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  // finish at the foot of p on the nearest adjacent segment
  cplx foot = c.points[best];
  double fs = c.params.empty() ? 0 : c.params[best];
  std::size_t keep = best + 1;
  for (std::size_t k : {best, best + 1}) {
    if (k == 0 || k >= c.size()) continue;
    const cplx a = c.points[k - 1], b = c.points[k];
    const double u = std::clamp(std::real((p - a) * std::conj(b - a)) / std::norm(b - a), 0.0, 1.0);
    const cplx q = a + u * (b - a);
    if (std::abs(q - p) < std::abs(foot - p)) {
      foot = q;
      keep = k;
      if (!c.params.empty()) fs = c.params[k - 1] + u * (c.params[k] - c.params[k - 1]);
    }
  }
  Curve out = c;
  out.points.resize(keep);
  out.points.push_back(foot);
  if (!out.params.empty()) {
    out.params.resize(keep);
    out.params.push_back(fs);
  }
  // drop a duplicated final vertex
  if (out.size() > 1 && std::abs(out.points[out.size() - 1] - out.points[out.size() - 2]) == 0) {
    out.points.pop_back();
    if (!out.params.empty()) out.params.pop_back();
  }
  return out;
}

}  // namespace slerho
