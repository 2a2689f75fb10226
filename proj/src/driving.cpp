#include "slerho/driving.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slerho/error.hpp"

namespace slerho {

std::string to_string(Setting s) {
  return s == Setting::ChordalHalfPlane ? "chordal" : "radial";
}

DrivingFunction::DrivingFunction(Setting setting, double start, double horizon, Fn value,
                                 Fn derivative, std::string family)
    : setting_(setting),
      start_(start),
      horizon_(horizon),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      family_(std::move(family)) {
  require(static_cast<bool>(value_), "driving function needs a value callable");
  require(horizon_ > start_, "driving horizon must exceed its start time");
}

void DrivingFunction::check_domain(double t) const {
  // a little slack so that grids built from floating sums still hit the end
  const double slack = 1e-12 * std::max(1.0, std::abs(horizon_));
  if (!(t >= start_ - slack) || t > horizon_ + slack) {
    std::ostringstream os;
    os << "t=" << t << " outside [" << start_ << ", " << horizon_ << "] for " << family_;
    fail(ErrorCode::OutsideHorizon, os.str());
  }
}

double DrivingFunction::operator()(double t) const {
  check_domain(t);
  return value_(std::clamp(t, start_, horizon_));
}

double DrivingFunction::derivative(double t) const {
  check_domain(t);
  t = std::clamp(t, start_, horizon_);
  if (derivative_) return derivative_(t);
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  const double a = std::max(start_, t - h);
  const double b = std::isfinite(horizon_) ? std::min(horizon_, t + h) : t + h;
  return (value_(b) - value_(a)) / (b - a);
}

std::span<const double> DrivingFunction::knots() const {
  if (!knots_) return {};
  return {knots_->data(), knots_->size()};
}

DrivingFunction DrivingFunction::sampled(Setting setting, std::vector<double> times,
                                         std::vector<double> values, std::string family) {
  require(times.size() == values.size(), "sample times and values differ in length");
  require(times.size() >= 2, "need at least two samples");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]))
      fail(ErrorCode::InvalidArgument, "sample times must be strictly increasing");
  }
  const std::size_t n = times.size();
  std::vector<double> d(n);
  if (n == 2) {
    d[0] = d[1] = (values[1] - values[0]) / (times[1] - times[0]);
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = times[i] - times[i - 1], h1 = times[i + 1] - times[i];
      d[i] = (-h1 / (h0 * (h0 + h1))) * values[i - 1] + ((h1 - h0) / (h0 * h1)) * values[i] +
             (h0 / (h1 * (h0 + h1))) * values[i + 1];
    }
    {
      const double h0 = times[1] - times[0], h1 = times[2] - times[1];
      d[0] = -(2 * h0 + h1) / (h0 * (h0 + h1)) * values[0] + (h0 + h1) / (h0 * h1) * values[1] -
             h0 / (h1 * (h0 + h1)) * values[2];
    }
    {
      const double h1 = times[n - 1] - times[n - 2], h0 = times[n - 2] - times[n - 3];
      d[n - 1] = h1 / (h0 * (h0 + h1)) * values[n - 3] - (h0 + h1) / (h0 * h1) * values[n - 2] +
                 (2 * h1 + h0) / (h1 * (h0 + h1)) * values[n - 1];
    }
  }
  auto t = std::make_shared<const std::vector<double>>(std::move(times));
  auto w = std::make_shared<const std::vector<double>>(std::move(values));
  auto dw = std::make_shared<const std::vector<double>>(std::move(d));

  auto locate = [t](double s) {
    auto it = std::upper_bound(t->begin(), t->end(), s);
    std::size_t k = it == t->begin() ? 0 : static_cast<std::size_t>(it - t->begin()) - 1;
    return std::min(k, t->size() - 2);
  };
  auto lerp = [t, locate](const std::vector<double>& y, double s) {
    const std::size_t k = locate(s);
    const double u = (s - (*t)[k]) / ((*t)[k + 1] - (*t)[k]);
    return y[k] + u * (y[k + 1] - y[k]);
  };
  DrivingFunction f(
      setting, t->front(), t->back(), [w, lerp](double s) { return lerp(*w, s); },
      [dw, lerp](double s) { return lerp(*dw, s); }, std::move(family));
  f.knots_ = t;
  return f;
}

DrivingFunction DrivingFunction::from_function(Setting setting, Fn value, double horizon,
                                               Fn derivative, std::string family) {
  return DrivingFunction(setting, 0.0, horizon, std::move(value), std::move(derivative),
                         std::move(family));
}

DrivingFunction DrivingFunction::shifted(double t0) const {
  check_domain(t0);
  const double w0 = (*this)(t0);
  auto self = *this;
  Fn v = [self, t0, w0](double s) { return self(t0 + s) - w0; };
  Fn d = [self, t0](double s) { return self.derivative(t0 + s); };
  DrivingFunction f(setting_, 0.0, horizon_ - t0, v, d, family_ + "/shifted");
  f.derivative_ = derivative_ ? d : nullptr;
  if (knots_) {
    std::vector<double> k;
    for (double s : *knots_)
      if (s > t0) k.push_back(s - t0);
    if (k.empty() || k.front() > 0) k.insert(k.begin(), 0.0);
    f.knots_ = std::make_shared<const std::vector<double>>(std::move(k));
  }
  return f;
}

DrivingFunction DrivingFunction::rescaled(double lambda) const {
  require(setting_ == Setting::ChordalHalfPlane, "Loewner scaling is chordal only");
  require(lambda > 0, "scale factor must be positive");
  auto self = *this;
  const double l2 = lambda * lambda;
  Fn v = [self, lambda, l2](double s) { return lambda * self(s / l2); };
  Fn d = nullptr;
  if (derivative_) d = [self, lambda, l2](double s) { return self.derivative(s / l2) / lambda; };
  DrivingFunction f(setting_, start_ * l2, horizon_ * l2, v, d, family_ + "/rescaled");
  if (knots_) {
    std::vector<double> k(*knots_);
    for (double& s : k) s *= l2;
    f.knots_ = std::make_shared<const std::vector<double>>(std::move(k));
  }
  return f;
}

ForcePoint ForcePoint::boundary(double x0, double rho) {
  require(std::isfinite(x0) && x0 != 0.0, "boundary force point must be a nonzero real");
  require(std::isfinite(rho), "rho must be finite");
  return {Kind::BoundaryChordal, cplx(x0, 0.0), 0.0, rho};
}

ForcePoint ForcePoint::interior(cplx z0, double rho) {
  require(z0.imag() > 0 && std::isfinite(z0.real()) && std::isfinite(z0.imag()),
          "interior force point must lie in the upper half-plane");
  require(std::isfinite(rho), "rho must be finite");
  return {Kind::InteriorChordal, z0, 0.0, rho};
}

ForcePoint ForcePoint::radial(double v0, double rho) {
  require(v0 > 0 && v0 < 2 * kPi, "radial force point angle must lie in (0, 2pi)");
  require(std::isfinite(rho), "rho must be finite");
  return {Kind::BoundaryRadial, std::polar(1.0, v0), v0, rho};
}

DrivingFunction make_chordal_sle0(double rho, double x0) {
  require(std::isfinite(x0) && x0 != 0.0, "x0 must be a nonzero real");
  require(std::isfinite(rho), "rho must be finite");
  const double s = x0 > 0 ? 1.0 : -1.0;
  const double a = std::abs(x0);
  std::ostringstream tag;
  tag << "chordal-sle0(rho=" << rho << ",x0=" << x0 << ")";
  if (rho == -2.0) {
    return DrivingFunction(
        Setting::ChordalHalfPlane, 0.0, kInf, [x0](double t) { return 2 * t / x0; },
        [x0](double) { return 2 / x0; }, tag.str());
  }
  const double c = rho / (rho + 2);
  const double k = 2 * (2 + rho);
  const double horizon = rho < -2 ? -a * a / k : kInf;
  return DrivingFunction(
      Setting::ChordalHalfPlane, 0.0, horizon,
      [=](double t) { return s * c * (a - std::sqrt(std::max(0.0, a * a + k * t))); },
      [=](double t) { return -s * rho / std::sqrt(std::max(0.0, a * a + k * t)); }, tag.str());
}

namespace {

// cos(v0/2) e^{-(rho+2)t/4}, the cosine of half the radial gap
double radial_half_gap_cos(double rho, double v0, double t) {
  return std::cos(v0 / 2) * std::exp(-(rho + 2) * t / 4);
}

}  // namespace

double radial_sle0_gap(double rho, double v0, double t) {
  if (rho == -2.0) return v0;
  const double a = radial_half_gap_cos(rho, v0, t);
  if (std::abs(a) > 1) fail(ErrorCode::OutsideHorizon, "radial SLE0 gap undefined past horizon");
  return 2 * std::acos(a);
}

DrivingFunction make_radial_sle0(double rho, double v0) {
  require(v0 > 0 && v0 < 2 * kPi, "v0 must lie in (0, 2pi)");
  require(std::isfinite(rho), "rho must be finite");
  std::ostringstream tag;
  tag << "radial-sle0(rho=" << rho << ",v0=" << v0 << ")";
  if (rho == -2.0) {
    const double c = 1 / std::tan(v0 / 2);
    return DrivingFunction(
        Setting::RadialDisk, 0.0, kInf, [c](double t) { return t * c; },
        [c](double) { return c; }, tag.str());
  }
  double horizon = kInf;
  const double c = std::cos(v0 / 2);
  if (rho < -2 && std::abs(c) > 1e-15) horizon = 4 * std::log(std::abs(c)) / (rho + 2);
  const double m = -rho / (rho + 2);
  return DrivingFunction(
      Setting::RadialDisk, 0.0, horizon,
      [=](double t) {
        const double a = std::clamp(radial_half_gap_cos(rho, v0, t), -1.0, 1.0);
        return m * (2 * std::acos(a) - v0);
      },
      [=](double t) {
        const double a = radial_half_gap_cos(rho, v0, t);
        return -(rho / 2) * a / std::sqrt(std::max(0.0, 1 - a * a));
      },
      tag.str());
}

DrivingFunction make_chordal_sle0_spiral(cplx z0) {
  require(z0.imag() > 0, "z0 must lie in the upper half-plane");
  const double r = std::abs(z0);
  const double c = std::cos(std::arg(z0));
  std::ostringstream tag;
  tag << "chordal-sle0-spiral(z0=" << z0.real() << "+" << z0.imag() << "i)";
  return DrivingFunction(
      Setting::ChordalHalfPlane, 0.0, r * r / 4,
      [=](double t) { return 2 * c * (r - std::sqrt(std::max(0.0, r * r - 4 * t))); },
      [=](double t) { return 4 * c / std::sqrt(std::max(0.0, r * r - 4 * t)); }, tag.str());
}

DrivingFunction make_wholeplane_sle0(double rho, double theta, double T, Orientation orientation,
                                     std::optional<double> v0_for_minus2,
                                     std::optional<double> t_min) {
  require(rho <= -2, "whole-plane SLE0(rho) requires rho <= -2");
  const double start = t_min.value_or(T - 20);
  require(start < T, "t_min must precede T");
  std::ostringstream tag;
  tag << "wholeplane-sle0(rho=" << rho << ",theta=" << theta << ",T=" << T << ")";
  if (rho == -2.0) {
    require(v0_for_minus2.has_value(), "rho = -2 needs the force point angle v0");
    const double v0 = *v0_for_minus2;
    require(v0 > 0 && v0 < 2 * kPi, "v0 must lie in (0, 2pi)");
    const double c = 1 / std::tan(v0 / 2);
    // the chain lives on all of R; expose [t_min, T]
    return DrivingFunction(
        Setting::RadialDisk, start, T, [=](double t) { return t * c + theta; },
        [c](double) { return c; }, tag.str());
  }
  const double sgn = orientation == Orientation::Positive ? 1.0 : -1.0;
  const double m = 2 * rho / (rho + 2);
  const double k = (rho + 2) / 4;
  return DrivingFunction(
      Setting::RadialDisk, start, T,
      [=](double t) { return sgn * m * std::asin(std::min(1.0, std::exp(k * (T - t)))) + theta; },
      [=](double t) {
        const double u = std::exp(k * (T - t));
        return -sgn * m * k * u / std::sqrt(std::max(0.0, 1 - u * u));
      },
      tag.str());
}

double ray_angle(double rho) { return kPi * (2 + rho) / (4 + rho); }

DrivingFunction make_ray(double rho) {
  require(rho > -2, "the ray family needs rho > -2");
  const double c = -rho * std::sqrt(2 / (rho + 2));
  std::ostringstream tag;
  tag << "ray(rho=" << rho << ")";
  return DrivingFunction(
      Setting::ChordalHalfPlane, 0.0, kInf, [c](double t) { return c * std::sqrt(t); },
      [c](double t) {
        if (c == 0) return 0.0;
        return t > 0 ? c / (2 * std::sqrt(t)) : std::copysign(kInf, c);
      },
      tag.str());
}

DrivingFunction make_sine_series(Setting setting, std::vector<double> amplitudes,
                                 std::vector<double> frequencies, double slope,
                                 std::string family) {
  require(amplitudes.size() == frequencies.size(), "amplitude/frequency count mismatch");
  auto a = std::make_shared<const std::vector<double>>(std::move(amplitudes));
  auto w = std::make_shared<const std::vector<double>>(std::move(frequencies));
  return DrivingFunction(
      setting, 0.0, kInf,
      [=](double t) {
        double s = slope * t;
        for (std::size_t i = 0; i < a->size(); ++i) s += (*a)[i] * std::sin((*w)[i] * t);
        return s;
      },
      [=](double t) {
        double s = slope;
        for (std::size_t i = 0; i < a->size(); ++i)
          s += (*a)[i] * (*w)[i] * std::cos((*w)[i] * t);
        return s;
      },
      std::move(family));
}

DrivingFunction add(const DrivingFunction& base, const DrivingFunction& extra) {
  require(base.setting() == extra.setting(), "cannot add drivings of different settings");
  const double start = std::max(base.start(), extra.start());
  const double horizon = std::min(base.horizon(), extra.horizon());
  DrivingFunction::Fn d = nullptr;
  if (base.has_analytic_derivative() && extra.has_analytic_derivative())
    d = [=](double t) { return base.derivative(t) + extra.derivative(t); };
  return DrivingFunction(
      base.setting(), start, horizon, [=](double t) { return base(t) + extra(t); }, d,
      base.family() + "+" + extra.family());
}

DrivingSamples sample_uniform(const DrivingFunction& f, double T, std::size_t n) {
  require(n >= 1, "need at least one interval");
  DrivingSamples out;
  out.t.resize(n + 1);
  out.value.resize(n + 1);
  const double a = f.start();
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = i == n ? T : a + (T - a) * static_cast<double>(i) / static_cast<double>(n);
    out.t[i] = t;
    out.value[i] = f(t);
  }
  return out;
}

}  // namespace slerho
