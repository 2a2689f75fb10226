#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slerho {

using cplx = std::complex<double>;

enum class Parametrization { HalfPlaneCapacity, ConformalRadius, ArcLength, Unknown };
enum class Domain { HalfPlane, Disk, SlitPlane, Plane };

std::string to_string(Parametrization p);
std::string to_string(Domain d);

/// Ordered polyline. `params` is either empty or holds one parameter value per
/// point (capacity time, conformal-radius time or arc length).
struct Curve {
  std::vector<cplx> points;
  std::vector<double> params;
  Parametrization parametrization = Parametrization::Unknown;
  Domain domain = Domain::HalfPlane;

  std::size_t size() const { return points.size(); }
  double diameter() const;
  double length() const;
};

/// Distance from p to the segment [a, b].
double point_segment_distance(cplx p, cplx a, cplx b);

/// Symmetric Hausdorff distance between two polylines. Each segment is
/// subdivided so that no probe is farther apart than `probe` (defaults to a
/// small fraction of the diameters), and every probe is measured against the
/// other curve's segments.
double hausdorff(const Curve& a, const Curve& b, std::optional<double> probe = std::nullopt);

struct CircleFit {
  cplx center;
  double radius = 0;
  double max_residual = 0;  ///< max | |p - center| - radius |
};
/// Algebraic (Kasa) least-squares fit.
CircleFit fit_circle(std::span<const cplx> pts);

struct SegmentCrossing {
  std::size_t i = 0, j = 0;  ///< segment indices, i + 1 < j
  cplx point;
};
/// First crossing of two non-adjacent segments (smallest j, then i), if any.
/// Crossings closer than `tol` to a shared endpoint are ignored.
std::optional<SegmentCrossing> first_self_intersection(std::span<const cplx> pts,
                                                       double tol = 0.0);

/// Applies f to every point; params and tags are preserved.
template <class F>
Curve map_curve(const Curve& c, F&& f, Domain domain) {
  Curve out;
  out.points.reserve(c.points.size());
  for (cplx z : c.points) out.points.push_back(f(z));
  out.params = c.params;
  out.parametrization = Parametrization::Unknown;
  out.domain = domain;
  return out;
}

/// Resamples a polyline at `n` + 1 points equally spaced in arc length.
Curve resample_arclength(const Curve& c, std::size_t n);

}  // namespace slerho
