#include "slerho/zipper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "slerho/error.hpp"
#include "slerho/loewner.hpp"

namespace slerho {

namespace {

// Lazily applied prefix of slit maps: images of the not-yet-peeled vertices
// are brought up to date in blocks, in parallel, and sequentially inside the
// current block.
class Peeler {
 public:
  Peeler(std::vector<cplx> pts, bool radial) : q_(std::move(pts)), radial_(radial) {
    applied_.assign(q_.size(), 0);
  }

  // Image of vertex k under all maps recorded so far.
  cplx image(std::size_t k) {
    catch_up(k, k + 1);
    return q_[k];
  }

  void push(double c, double dt) {
    c_.push_back(c);
    dt_.push_back(dt);
    // flush a block of maps onto all remaining points
    if (c_.size() - flushed_ >= kBlock) flush(c_.size());
  }

  std::size_t maps() const { return c_.size(); }

 private:
  static constexpr std::size_t kBlock = 128;

  cplx apply(cplx z, std::size_t m) const {
    return radial_ ? slit::radial_forward(z, c_[m], dt_[m])
                   : slit::chordal_forward(z, c_[m], dt_[m]);
  }

  void catch_up(std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      for (std::size_t m = applied_[k]; m < c_.size(); ++m) q_[k] = apply(q_[k], m);
      applied_[k] = c_.size();
    }
  }

  void flush(std::size_t upto) {
    const std::size_t first = upto;  // vertices before `upto` are peeled
    if (first >= q_.size()) return;
    detail::parallel_for(
        q_.size() - first,
        [&](std::size_t i) {
          const std::size_t k = first + i;
          for (std::size_t m = applied_[k]; m < upto; ++m) q_[k] = apply(q_[k], m);
          applied_[k] = upto;
        },
        512);
    flushed_ = upto;
  }

  std::vector<cplx> q_;
  std::vector<std::size_t> applied_;
  std::vector<double> c_, dt_;
  std::size_t flushed_ = 0;
  bool radial_;
};

}  // namespace

ZipperResult extract_driving(const Curve& curve, Setting setting, const ZipperOptions& opts) {
  const auto& p = curve.points;
  require(p.size() >= 3, "zipper needs at least three vertices");
  const bool radial = setting == Setting::RadialDisk;
  const double diam = std::max(curve.diameter(), 1e-300);
  const double tol = 1e-10 * (radial ? 1.0 : diam);

  if (radial)
    require(std::abs(std::abs(p[0]) - 1) < 1e-9, "disk curve must start on the unit circle");
  else
    require(std::abs(p[0].imag()) <= tol, "half-plane curve must start on the real line");
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (std::abs(p[k] - p[k - 1]) <= 1e-14 * diam) {
      std::ostringstream os;
      os << "vertices " << k - 1 << " and " << k << " coincide";
      fail(ErrorCode::DegenerateStep, os.str());
    }
    const bool inside = radial ? std::abs(p[k]) < 1 : p[k].imag() > 0;
    if (!inside) {
      std::ostringstream os;
      os << "vertex " << k << " leaves the open domain";
      fail(ErrorCode::SelfIntersection, os.str());
    }
  }

  Peeler peel(p, radial);
  std::vector<double> times{0.0};
  std::vector<double> drive{radial ? std::arg(p[0]) : p[0].real()};
  for (std::size_t k = 1; k < p.size(); ++k) {
    const cplx q = peel.image(k);
    double c = 0, dt = 0;
    if (radial) {
      const double r = std::abs(q);
      if (!(r < 1 - 1e-15)) {
        std::ostringstream os;
        os << "vertex " << k << " maps to the boundary: the curve touches itself";
        fail(ErrorCode::SelfIntersection, os.str());
      }
      // unwrap the angle next to the previous driving value
      c = drive.back() + std::remainder(std::arg(q) - drive.back(), 2 * kPi);
      dt = 2 * std::log1p(r) - std::log(4 * r);
    } else {
      if (!(q.imag() > 1e-13 * diam)) {
        std::ostringstream os;
        os << "vertex " << k << " maps to the real line: the curve touches itself";
        fail(ErrorCode::SelfIntersection, os.str());
      }
      c = q.real();
      dt = q.imag() * q.imag() / 4;
    }
    if (!(dt > 0)) fail(ErrorCode::DegenerateStep, "zero capacity increment");
    peel.push(c, dt);
    times.push_back(times.back() + dt);
    drive.push_back(c);
  }

  if (opts.spacing_guard && times.size() > 3) {
    std::vector<double> inc(times.size() - 1);
    for (std::size_t k = 1; k < times.size(); ++k) inc[k - 1] = times[k] - times[k - 1];
    std::vector<double> sorted = inc;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (std::size_t k = 0; k < inc.size(); ++k) {
      if (inc[k] > opts.spacing_factor * median) {
        std::ostringstream os;
        os << "capacity increment " << inc[k] << " at vertex " << k + 1 << " exceeds "
           << opts.spacing_factor << "x the median " << median;
        fail(ErrorCode::IrregularSpacing, os.str());
      }
    }
  }

  ZipperResult res{DrivingFunction::sampled(setting, times, drive, "zipper"), times, -1};
  if (opts.compute_residual) {
    const std::size_t n = opts.residual_steps ? opts.residual_steps : 2 * (p.size() - 1);
    const Curve back = trace(res.drive, n, times.back());
    res.residual = hausdorff(curve, back);
  }
  return res;
}

Curve capacity_reparametrize(const Curve& curve, Setting setting, std::size_t n) {
  ZipperOptions opts;
  opts.spacing_guard = false;
  opts.compute_residual = false;
  const ZipperResult z = extract_driving(curve, setting, opts);
  const auto& t = z.capacity_times;
  if (n == 0) n = curve.points.size() - 1;
  Curve out;
  out.domain = curve.domain;
  out.parametrization = setting == Setting::RadialDisk ? Parametrization::ConformalRadius
                                                        : Parametrization::HalfPlaneCapacity;
  std::size_t k = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double s = j == n ? t.back() : t.back() * static_cast<double>(j) / static_cast<double>(n);
    while (k + 2 < t.size() && t[k + 1] < s) ++k;
    const double u = std::clamp((s - t[k]) / (t[k + 1] - t[k]), 0.0, 1.0);
    out.points.push_back(curve.points[k] + u * (curve.points[k + 1] - curve.points[k]));
    out.params.push_back(s);
  }
  return out;
}

}  // namespace slerho
