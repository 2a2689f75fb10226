#pragma once

#include <functional>
#include <string>
#include <vector>

#include "slerho/driving.hpp"

namespace slerho {

/// A conformal map given through log|h'|. The gradient is optional; when
/// absent it is taken by centered differences at the cell scale.
struct ConformalMapSample {
  std::string name;
  std::function<double(cplx)> log_abs_deriv;
  /// d/dx + i d/dy of log|h'|, i.e. conj(h''/h').
  std::function<cplx(cplx)> gradient;
  /// Branch points and poles of h''/h'.
  std::vector<cplx> singular_points;
};

ConformalMapSample identity_map();
ConformalMapSample scaling_map(double lambda);
/// z -> z^p on the slit plane (principal branch).
ConformalMapSample power_map(double p);
/// Two-sector corner map: z^{1/(2 beta)} on arg z in (0, 2 beta pi) and
/// -z^{1/(2 - 2 beta)} (rotated) on the rest.
ConformalMapSample two_sector_map(double beta);
/// Pre-composition with the rotation z -> e^{i phi} z.
ConformalMapSample rotated(const ConformalMapSample& m, double phi);

/// Annular sector r_in < |z| < r_out, theta0 < arg z < theta1 (angles taken
/// in [theta0, theta1] without wrapping).
struct SectorDomain {
  double r_in = 1, r_out = 2;
  double theta0 = 0, theta1 = 2 * kPi;
};
struct RectDomain {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};

/// (1/pi) int |grad log|h'||^2 by the midpoint rule on a grid uniform in
/// log r and theta (n_r x n_theta cells).
double grid_dirichlet(const ConformalMapSample& map, const SectorDomain& dom, std::size_t n_r,
                      std::size_t n_theta);
/// Same on a Cartesian grid. Throws SingularityOnGrid when a singular point
/// lies in the closed rectangle.
double grid_dirichlet(const ConformalMapSample& map, const RectDomain& dom, std::size_t nx,
                      std::size_t ny);

/// Exact value for z^p on a sector of opening `angle`: angle (p-1)^2 ln(R/r) / pi.
double power_map_dirichlet(double p, double angle, double r_in, double r_out);

/// (1 - 2 beta)^2 / (2 beta (1 - beta)).
double c_beta(double beta);

struct RenormalizedStudy {
  double beta = 0.5;
  double c_beta = 0;
  std::vector<double> radii;
  std::vector<double> dirichlet;     ///< (1/pi) int over the annulus r < |z| < R
  std::vector<double> renormalized;  ///< dirichlet - c_beta log R
  double slope = 0;                  ///< least-squares d dirichlet / d log R
  double limit = 0;                  ///< extrapolated renormalized energy
};

/// Integrates the two sectors separately (grid lines on the corner rays),
/// with `cells_per_decade` radial cells per factor 10 in R. Throws
/// NonConvergent when the renormalized values fail to settle within `tol`.
RenormalizedStudy renormalized_dirichlet(const ConformalMapSample& map, double beta, double r_in,
                                         const std::vector<double>& radii,
                                         std::size_t cells_per_decade = 64,
                                         std::size_t n_theta = 32, double tol = 1e-3);

struct IdentityCheck {
  std::string name;
  double lhs = 0, rhs = 0;
  bool ok = false;
};

/// Trivial cases of the Dirichlet-energy formulas: the SLE_0(rho) curve
/// against itself (both sides 0), and the coefficients of the point terms
/// against the integrated-formula coefficients.
std::vector<IdentityCheck> theorem_identity_trivial_checks(double rho);

}  // namespace slerho
