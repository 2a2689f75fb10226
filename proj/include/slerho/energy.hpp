#pragma once

#include <string>
#include <vector>

#include "slerho/driving.hpp"
#include "slerho/geometry.hpp"
#include "slerho/loewner.hpp"
#include "slerho/zipper.hpp"

namespace slerho {

struct EnergyOptions {
  TrackOptions track;
  /// Run the dyadic-refinement test for sampled or derivative-free drives.
  bool check_absolute_continuity = true;
};

/// A two-sided bound lower <= value <= upper (one side may be infinite).
struct Certificate {
  std::string name;
  double lower = -kInf;
  double value = 0;
  double upper = kInf;
  bool applicable = true;
  bool ok = true;
  /// Smallest slack min(value - lower, upper - value) over the checked times.
  double margin = kInf;
  std::string note;
};

struct EnergyReport {
  double direct = 0;
  double integrated = 0;
  double base_energy = 0;     ///< I^C = 1/2 int W'^2 or I^R = 1/2 int w'^2
  double log_sin_term = 0;    ///< interior only
  double log_deriv_term = 0;
  double log_gap_term = 0;    ///< boundary and radial
  double discrepancy = 0;
  bool infinite = false;      ///< drive failed the absolute-continuity test
  double final_time = 0;
  std::size_t steps = 0;
  std::vector<Certificate> certificates;
};

/// Dyadic test: the discrete Dirichlet energy 1/2 sum dW^2/dt must not grow
/// by more than 1.5x under each of two successive refinements. Drives with
/// an analytic derivative pass without sampling.
bool passes_absolute_continuity(const DrivingFunction& drive, double T);

/// 1/2 int (W' - drift)^2 over the track grid (trapezoid); cumulative values
/// at every track time.
std::vector<double> cumulative_direct_energy(const LoewnerTrack& track);
/// 1/2 int W'^2, cumulative.
std::vector<double> cumulative_base_energy(const LoewnerTrack& track);

/// Direct rho-Loewner energy. Returns +inf for drives flagged as not
/// absolutely continuous; throws ForcePointApproach if the force point is
/// reached before T.
double rho_energy_direct(const DrivingFunction& drive, const ForcePoint& fp, double T,
                         const EnergyOptions& opts = {});

/// Both routes on one track, with the terms of the integrated formula.
EnergyReport rho_energy_integrated(const DrivingFunction& drive, const ForcePoint& fp, double T,
                                   const EnergyOptions& opts = {});
EnergyReport energy_report(const LoewnerTrack& track);

/// Minimal chordal energy of a curve through z0: -8 log sin arg z0.
double min_energy_through_point(cplx z0);

// ---------------------------------------------------------------------------
// coordinate changes

struct CoordinateChange {
  double lhs = 0, rhs = 0;
  double discrepancy = 0;  ///< |lhs - rhs|
  double residual_lhs = 0, residual_rhs = 0;  ///< zipper roundtrip residuals
};

/// z -> x0 z / (x0 - z): (H; 0, inf) with force point x0 against (H; 0, inf)
/// with force point -x0 and weight -6 - rho. Both energies are computed from
/// zipper-extracted drives.
CoordinateChange coordinate_change_chordal(const Curve& curve, double rho, double x0,
                                           const ZipperOptions& zopts = {},
                                           const EnergyOptions& eopts = {});

/// Radial curve from 1 in D with force point e^{i v0}, against the chordal
/// energy with weight -6 - rho and interior force point e^{i(pi - v0/2)} of
/// its image under z -> -e^{i v0/2} (z - 1) / (z - e^{i v0}).
CoordinateChange coordinate_change_radial(const Curve& curve, double rho, double v0,
                                          const ZipperOptions& zopts = {},
                                          const EnergyOptions& eopts = {});

cplx chordal_swap_map(cplx z, double x0);
cplx radial_to_chordal_map(cplx z, double v0);
/// i (1 - z) / (1 + z): (D; 1, -1) onto (H; 0, inf), with 0 -> i.
cplx disk_to_halfplane(cplx z);

// ---------------------------------------------------------------------------
// bounds

struct WeldingBound {
  double bound = 0;
  double r_T = 0, r_0 = 0;
};

/// Track options that co-integrate the auxiliary point y0 = -2 x0 / (2 + rho).
TrackOptions welding_track_options(double rho, double x0, TrackOptions base = {});
/// Requires a boundary track whose first auxiliary point is y0.
WeldingBound welding_lower_bound(const LoewnerTrack& track, double rho, double x0);

/// Applicable two-sided bounds evaluated at every track time against the
/// direct energy: the interior sandwich and log-derivative bounds (rho < -4),
/// the boundary sandwich (rho > -2), the welding bound (rho > -2), and for
/// interior points the final sin(theta) as a diagnostic.
std::vector<Certificate> bound_certificates(const DrivingFunction& drive, const ForcePoint& fp,
                                            double T, const EnergyOptions& opts = {});

/// Radial against (D; 1, -1) chordal energy for a curve from 1 toward 0:
/// value I^R from a radial zipper, bounds I^C/4 - 3 log sin(theta_T) and
/// I^C - 6 log sin(theta_T) from a chordal zipper of the image in H.
Certificate chordal_radial_certificate(const Curve& disk_curve, const ZipperOptions& zopts = {},
                                       const EnergyOptions& eopts = {});

/// |I(0,T) - I(0,s) - I(remainder)| where the remainder is driven by
/// W_{s+t} - W_s with force point z_s - W_s (or gap v_s - w_s).
double energy_additivity_check(const DrivingFunction& drive, const ForcePoint& fp, double T,
                               double t_split, const EnergyOptions& opts = {});

}  // namespace slerho
