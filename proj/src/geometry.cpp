#include "slerho/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slerho/error.hpp"

namespace slerho {

std::string to_string(Parametrization p) {
  switch (p) {
    case Parametrization::HalfPlaneCapacity: return "half-plane-capacity";
    case Parametrization::ConformalRadius: return "conformal-radius";
    case Parametrization::ArcLength: return "arc-length";
    case Parametrization::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::HalfPlane: return "H";
    case Domain::Disk: return "D";
    case Domain::SlitPlane: return "C\\R+";
    case Domain::Plane: return "C";
  }
  return "?";
}

double Curve::diameter() const {
  // exact O(n^2) is fine for the sizes we use, but cap the work with a
  // bounding-box estimate for long curves
  if (points.size() < 2) return 0;
  if (points.size() <= 4000) {
    double d = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j)
        d = std::max(d, std::abs(points[i] - points[j]));
    return d;
  }
  double x0 = points[0].real(), x1 = x0, y0 = points[0].imag(), y1 = y0;
  for (cplx p : points) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  // farthest point from each bounding-box corner gives a 2-approximation;
  // refine with the farthest pair among extreme points
  std::vector<cplx> ext;
  for (cplx p : points)
    if (p.real() == x0 || p.real() == x1 || p.imag() == y0 || p.imag() == y1) ext.push_back(p);
  double d = 0;
  for (cplx e : ext)
    for (cplx p : points) d = std::max(d, std::abs(e - p));
  return d;
}

double Curve::length() const {
  double s = 0;
  for (std::size_t i = 1; i < points.size(); ++i) s += std::abs(points[i] - points[i - 1]);
  return s;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double L2 = std::norm(d);
  if (L2 == 0) return std::abs(p - a);
  const double u = std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0);
  return std::abs(p - (a + u * d));
}

namespace {

// Uniform bucket grid over segments, for nearest-segment queries.
class SegmentIndex {
 public:
  explicit SegmentIndex(std::span<const cplx> pts) : pts_(pts) {
    lo_ = hi_ = pts[0];
    for (cplx p : pts) {
      lo_ = {std::min(lo_.real(), p.real()), std::min(lo_.imag(), p.imag())};
      hi_ = {std::max(hi_.real(), p.real()), std::max(hi_.imag(), p.imag())};
    }
    const double w = std::max(hi_.real() - lo_.real(), 1e-300);
    const double h = std::max(hi_.imag() - lo_.imag(), 1e-300);
    const std::size_t nseg = pts.size() > 1 ? pts.size() - 1 : 1;
    const double cells = std::clamp(static_cast<double>(nseg), 1.0, 250000.0);
    cell_ = std::sqrt(w * h / cells);
    cell_ = std::max({cell_, w / 2000, h / 2000, 1e-300});
    nx_ = static_cast<int>(w / cell_) + 1;
    ny_ = static_cast<int>(h / cell_) + 1;
    buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    if (pts.size() == 1) {
      buckets_[index(pts[0])].push_back(0);
      single_ = true;
      return;
    }
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      auto [ax, ay] = cell(pts[s]);
      auto [bx, by] = cell(pts[s + 1]);
      for (int x = std::min(ax, bx); x <= std::max(ax, bx); ++x)
        for (int y = std::min(ay, by); y <= std::max(ay, by); ++y)
          buckets_[static_cast<std::size_t>(y) * nx_ + x].push_back(s);
    }
  }

  double distance(cplx p) const {
    auto [cx, cy] = cell(p);
    double best = std::numeric_limits<double>::infinity();
    auto scan = [&](int x, int y) {
      for (std::size_t s : buckets_[static_cast<std::size_t>(y) * nx_ + x]) {
        const double d = single_ ? std::abs(p - pts_[0])
                                 : point_segment_distance(p, pts_[s], pts_[s + 1]);
        best = std::min(best, d);
      }
    };
    for (int r = 0;; ++r) {
      // ring r, clipped to the grid
      const int x0 = std::max(cx - r, 0), x1 = std::min(cx + r, nx_ - 1);
      const int y0 = std::max(cy - r, 0), y1 = std::min(cy + r, ny_ - 1);
      if (cy - r >= 0)
        for (int x = x0; x <= x1; ++x) scan(x, cy - r);
      if (r > 0 && cy + r < ny_)
        for (int x = x0; x <= x1; ++x) scan(x, cy + r);
      for (int y = std::max(cy - r + 1, 0); y <= std::min(cy + r - 1, ny_ - 1); ++y) {
        if (cx - r >= 0) scan(cx - r, y);
        if (r > 0 && cx + r < nx_) scan(cx + r, y);
      }
      // every cell beyond ring r is at least r * cell_ away from p's cell
      if (best <= r * cell_) break;
      if (x0 == 0 && y0 == 0 && x1 == nx_ - 1 && y1 == ny_ - 1) break;
    }
    return best;
  }

 private:
  std::pair<int, int> cell(cplx p) const {
    int x = static_cast<int>(std::floor((p.real() - lo_.real()) / cell_));
    int y = static_cast<int>(std::floor((p.imag() - lo_.imag()) / cell_));
    return {std::clamp(x, 0, nx_ - 1), std::clamp(y, 0, ny_ - 1)};
  }
  std::size_t index(cplx p) const {
    auto [x, y] = cell(p);
    return static_cast<std::size_t>(y) * nx_ + x;
  }

  std::span<const cplx> pts_;
  cplx lo_, hi_;
  double cell_ = 1;
  int nx_ = 1, ny_ = 1;
  bool single_ = false;
  std::vector<std::vector<std::size_t>> buckets_;
};

double directed(std::span<const cplx> from, const SegmentIndex& to, double probe) {
  double worst = 0;
  auto visit = [&](cplx p) { worst = std::max(worst, to.distance(p)); };
  visit(from[0]);
  for (std::size_t i = 1; i < from.size(); ++i) {
    const cplx a = from[i - 1], b = from[i];
    const int m = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / probe)));
    for (int k = 1; k <= m; ++k) visit(a + (b - a) * (static_cast<double>(k) / m));
  }
  return worst;
}

}  // namespace

double hausdorff(const Curve& a, const Curve& b, std::optional<double> probe) {
  require(!a.points.empty() && !b.points.empty(), "hausdorff distance of an empty curve");
  double step = 0;
  if (probe) {
    step = *probe;
  } else {
    const double scale = std::max(a.length(), b.length());
    step = scale > 0 ? scale / 20000 : 1.0;
  }
  require(step > 0, "probe spacing must be positive");
  SegmentIndex ia(a.points), ib(b.points);
  return std::max(directed(a.points, ib, step), directed(b.points, ia, step));
}

CircleFit fit_circle(std::span<const cplx> pts) {
  require(pts.size() >= 3, "circle fit needs three points");
  // solve min sum (x^2 + y^2 + D x + E y + F)^2 via normal equations,
  // centred on the mean for conditioning
  cplx mean = 0;
  for (cplx p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double Sxx = 0, Sxy = 0, Syy = 0, Sxz = 0, Syz = 0, Sz = 0, Sx = 0, Sy = 0;
  const double n = static_cast<double>(pts.size());
  for (cplx q : pts) {
    const cplx p = q - mean;
    const double x = p.real(), y = p.imag(), z = x * x + y * y;
    Sxx += x * x;
    Sxy += x * y;
    Syy += y * y;
    Sxz += x * z;
    Syz += y * z;
    Sz += z;
    Sx += x;
    Sy += y;
  }
  // unknowns D, E, F:  [Sxx Sxy Sx; Sxy Syy Sy; Sx Sy n] [D E F]^T = -[Sxz Syz Sz]
  double A[3][4] = {{Sxx, Sxy, Sx, -Sxz}, {Sxy, Syy, Sy, -Syz}, {Sx, Sy, n, -Sz}};
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    if (std::abs(A[c][c]) < 1e-300) fail(ErrorCode::NonConvergent, "degenerate circle fit");
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (int k = c; k < 4; ++k) A[r][k] -= f * A[c][k];
    }
  }
  const double D = A[0][3] / A[0][0], E = A[1][3] / A[1][1], F = A[2][3] / A[2][2];
  CircleFit fit;
  fit.center = mean + cplx(-D / 2, -E / 2);
  fit.radius = std::sqrt(std::max(0.0, D * D / 4 + E * E / 4 - F));
  for (cplx p : pts)
    fit.max_residual = std::max(fit.max_residual, std::abs(std::abs(p - fit.center) - fit.radius));
  return fit;
}

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

std::optional<cplx> segment_hit(cplx p, cplx p2, cplx q, cplx q2) {
  const cplx r = p2 - p, s = q2 - q;
  const double den = cross(r, s);
  if (den == 0) return std::nullopt;
  const double t = cross(q - p, s) / den;
  const double u = cross(q - p, r) / den;
  if (t < 0 || t > 1 || u < 0 || u > 1) return std::nullopt;
  return p + t * r;
}

}  // namespace

std::optional<SegmentCrossing> first_self_intersection(std::span<const cplx> pts, double tol) {
  if (pts.size() < 4) return std::nullopt;
  // sweep in order of the later segment so that the first crossing along
  // the curve is reported; the bounding-box test keeps this fast enough
  const std::size_t n = pts.size() - 1;
  for (std::size_t j = 2; j < n; ++j) {
    const cplx a = pts[j], b = pts[j + 1];
    const double xl = std::min(a.real(), b.real()), xh = std::max(a.real(), b.real());
    const double yl = std::min(a.imag(), b.imag()), yh = std::max(a.imag(), b.imag());
    for (std::size_t i = 0; i + 1 < j; ++i) {
      const cplx c = pts[i], d = pts[i + 1];
      if (std::max(c.real(), d.real()) < xl || std::min(c.real(), d.real()) > xh ||
          std::max(c.imag(), d.imag()) < yl || std::min(c.imag(), d.imag()) > yh)
        continue;
      if (auto hit = segment_hit(c, d, a, b)) {
        if (tol > 0 && (std::abs(*hit - pts[i + 1]) < tol || std::abs(*hit - pts[j]) < tol) &&
            j == i + 2)
          continue;
        return SegmentCrossing{i, j, *hit};
      }
    }
  }
  return std::nullopt;
}

Curve resample_arclength(const Curve& c, std::size_t n) {
  require(c.points.size() >= 2 && n >= 1, "resampling needs a polyline and n >= 1");
  std::vector<double> s(c.points.size(), 0.0);
  for (std::size_t i = 1; i < c.points.size(); ++i)
    s[i] = s[i - 1] + std::abs(c.points[i] - c.points[i - 1]);
  Curve out;
  out.domain = c.domain;
  out.parametrization = Parametrization::ArcLength;
  std::size_t k = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double target = s.back() * static_cast<double>(j) / static_cast<double>(n);
    while (k + 2 < s.size() && s[k + 1] < target) ++k;
    const double len = s[k + 1] - s[k];
    const double u = len > 0 ? std::clamp((target - s[k]) / len, 0.0, 1.0) : 0.0;
    out.points.push_back(c.points[k] + u * (c.points[k + 1] - c.points[k]));
    out.params.push_back(target);
  }
  return out;
}

}  // namespace slerho
