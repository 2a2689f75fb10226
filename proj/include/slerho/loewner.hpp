#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "slerho/driving.hpp"
#include "slerho/geometry.hpp"

namespace slerho {

// ---------------------------------------------------------------------------
// point flow

struct FlowResult {
  std::vector<cplx> values;       ///< g_T(z), or the value at the stop time
  std::vector<double> stop_times;  ///< T for points that survived
  std::vector<bool> swallowed;
};

/// Integrates the chordal or radial Loewner equation for each point with
/// adaptive RK4 (step doubling). A point stops when it comes within
/// `eps_stop` of the driving point.
FlowResult flow_points(const DrivingFunction& drive, std::span<const cplx> points, double T,
                       double eps_stop = 1e-9, double tol = 1e-11);

// ---------------------------------------------------------------------------
// force-point tracking

enum class StopReason { ReachedT, ForcePointApproach, NumericalBlowup };
std::string to_string(StopReason r);

struct TrackOptions {
  double dt = 1e-3;            ///< base step
  double eps_stop_rel = 1e-6;  ///< stop when gap < eps_stop_rel * initial gap
  double min_step_rel = 1e-14; ///< StepSizeUnderflow below this fraction of T
  /// Additional real boundary points to co-integrate (chordal only).
  std::vector<double> aux_boundary;
  /// Refinement triggers: halve when the gap shrinks by more than this
  /// fraction, or when |dW| exceeds `max_dw_gap` times the gap.
  double max_gap_shrink = 0.02;
  double max_dw_gap = 0.1;
  /// Times the step sequence must land on exactly.
  std::vector<double> breakpoints;
};

struct LoewnerTrack {
  Setting setting = Setting::ChordalHalfPlane;
  ForcePoint fp{};
  std::vector<double> times;
  std::vector<double> driving;       ///< W_t or w_t
  std::vector<double> driving_rate;  ///< dW/dt from the driving function
  std::vector<cplx> force_image;     ///< z_t, x_t (real) or e^{i v_t}
  std::vector<double> force_angle;   ///< v_t (radial only)
  /// log|g_t'(z0)|; for boundary points the derivative of the real/angle map.
  std::vector<double> log_deriv;
  std::vector<double> theta;         ///< arg(z_t - W_t) (interior only)
  std::vector<std::vector<double>> aux;  ///< flows of TrackOptions::aux_boundary
  StopReason stop = StopReason::ReachedT;
  double stop_lo = 0, stop_hi = 0;   ///< bracket of the stopping time

  std::size_t size() const { return times.size(); }
  double final_time() const { return times.back(); }
  /// |W_t - z_t| (chordal) or |e^{i w_t} - e^{i v_t}| (radial).
  double gap(std::size_t k) const;
  double y(std::size_t k) const { return force_image[k].imag(); }
};

/// Co-integrates the force point and its derivative accumulators up to T (or
/// until the gap collapses; see `stop`). Steps are aligned with the knots of
/// sampled driving functions so the quadrature never straddles a kink.
LoewnerTrack track_force_point(const DrivingFunction& drive, const ForcePoint& fp, double T,
                               const TrackOptions& opts = {});

/// Throws ForcePointApproach when the track stopped early.
void require_complete(const LoewnerTrack& track);

// ---------------------------------------------------------------------------
// traces

/// Uniform in t; uniform in sqrt(t) (refined at the start); uniform in
/// sqrt(T - t); uniform in log(T - t) down to 1e-12 (T - t_0), for curves
/// that end on the boundary or at a force point.
enum class TraceGrid { Uniform, SqrtUniform, SqrtEnd, GeometricEnd };

struct TraceOptions {
  TraceGrid grid = TraceGrid::Uniform;
  /// Extra dyadic subdivisions allowed per step when |dW| > 0.05 sqrt(dt).
  int max_refine = 0;
};

/// Vertical-slit (chordal) or radial-slit (disk) approximation of the trace.
/// Chordal curves start at W_0; radial curves start at e^{i w_0}.
Curve trace(const DrivingFunction& drive, std::size_t n_steps, double T,
            const TraceOptions& opts = {});

/// Trace on the given increasing time grid (first entry is the start time).
Curve trace_on_grid(const DrivingFunction& drive, std::span<const double> times);

// Elementary slit maps shared with the zipper.
namespace slit {
/// Chordal: maps H minus the vertical slit [c, c + 2 i sqrt(dt)] onto H.
cplx chordal_forward(cplx z, double c, double dt);
cplx chordal_inverse(cplx w, double c, double dt);
/// Radial: maps D minus the radial slit from e^{ic} onto D with g(0) = 0,
/// g'(0) = e^{dt}.
cplx radial_forward(cplx z, double c, double dt);
cplx radial_inverse(cplx w, double c, double dt);
/// Slit tip of the radial map with angle c and time increment dt.
cplx radial_tip(double c, double dt);
}  // namespace slit

// ---------------------------------------------------------------------------
// whole-plane

struct WholePlaneParams {
  double rho = -6;
  Orientation orientation = Orientation::Positive;
  double theta = 0;        ///< start direction e^{i theta}
  bool inverted = true;    ///< start at 0 with reference point infinity
  std::size_t n = 4000;    ///< number of vertices
  double v0 = kPi / 2;     ///< force-point angle for rho = -2
  double y0 = 1;           ///< height of the horizontal line (sets the scale)
  double span = 60;        ///< parameter range: x in (x_end, span * y0)
  /// Stop a rho in (-4, -2) curve where its loop closes; otherwise continue
  /// along the whole line (the continuation crosses the earlier curve).
  bool cut_loop = true;
};

/// Closed-form whole-plane SLE_0(rho) trace, rho <= -2: the image of a
/// horizontal line under the power map (rho < -2) or the logarithmic spiral
/// exp(e^{iC} s) (rho = -2). For rho in (-4, -2) the curve is cut at its first
/// self-intersection. Points are ordered from the start (infinity, or 0 when
/// inverted).
Curve trace_wholeplane(const WholePlaneParams& p);

/// Parameter x1 > 0 such that x = -x1 closes the first loop, rho in (-4,-2).
double wholeplane_self_intersection_x(double rho, double y0 = 1);

/// The same curve from the Loewner chain: radial trace of the whole-plane
/// driving on [T - window, T], carried back by z -> e^{-(T - window)} z
/// (standard convention) or its reciprocal (inverted).
Curve trace_wholeplane_loewner(double rho, Orientation orientation, double theta, double T,
                               std::size_t n, bool inverted = true, double window = 20,
                               std::optional<double> v0 = std::nullopt);

}  // namespace slerho
