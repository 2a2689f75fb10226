#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slerho {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Reference settings: (H; 0, inf) and (D; 1, 0).
enum class Setting { ChordalHalfPlane, RadialDisk };

std::string to_string(Setting s);

/// A real driving path on [start, horizon]. Chordal settings store W_t, radial
/// settings store the unwrapped angle w_t with driving e^{i w_t}.
///
/// Instances are immutable and cheap to copy (the callables are shared).
class DrivingFunction {
 public:
  using Fn = std::function<double(double)>;

  DrivingFunction(Setting setting, double start, double horizon, Fn value,
                  Fn derivative, std::string family);

  /// Piecewise-linear interpolation of samples. The derivative at a knot is
  /// the three-point finite difference on the (possibly non-uniform) grid,
  /// one-sided at the two ends, and is interpolated linearly in between.
  static DrivingFunction sampled(Setting setting, std::vector<double> times,
                                 std::vector<double> values, std::string family);

  /// Wraps an arbitrary callable; derivative optional (finite differences
  /// are used when absent).
  static DrivingFunction from_function(Setting setting, Fn value,
                                       double horizon = kInf,
                                       Fn derivative = nullptr,
                                       std::string family = "user");

  Setting setting() const { return setting_; }
  double start() const { return start_; }
  double horizon() const { return horizon_; }
  const std::string& family() const { return family_; }
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }
  bool is_sampled() const { return knots_ && !knots_->empty(); }

  /// Throws OutsideHorizon for t outside [start, horizon].
  double operator()(double t) const;
  double derivative(double t) const;

  /// Breakpoints where the derivative may be non-smooth (sample times of a
  /// sampled function, carried through shifts and rescalings). Empty for
  /// closed forms.
  std::span<const double> knots() const;

  /// t -> value(start + t) - value(start); used to restart a chain.
  DrivingFunction shifted(double t0) const;
  /// Loewner scaling t -> lambda * W(t / lambda^2) (chordal only).
  DrivingFunction rescaled(double lambda) const;

 private:
  void check_domain(double t) const;

  Setting setting_;
  double start_;
  double horizon_;
  Fn value_;
  Fn derivative_;
  std::string family_;
  std::shared_ptr<const std::vector<double>> knots_;
};

/// Force point of the SLE_0(rho) / rho-Loewner energy.
struct ForcePoint {
  enum class Kind { BoundaryChordal, InteriorChordal, BoundaryRadial };

  Kind kind;
  cplx location;  ///< x0 (real), z0 in H, or e^{i v0}
  double v0 = 0;  ///< radial angle, only meaningful for BoundaryRadial
  double rho = 0;

  static ForcePoint boundary(double x0, double rho);
  static ForcePoint interior(cplx z0, double rho);
  static ForcePoint radial(double v0, double rho);

  Setting setting() const {
    return kind == Kind::BoundaryRadial ? Setting::RadialDisk : Setting::ChordalHalfPlane;
  }
  double x0() const { return location.real(); }
};

/// Chordal SLE_0(rho) with boundary force point x0.
DrivingFunction make_chordal_sle0(double rho, double x0);

/// Radial SLE_0(rho) with force point e^{i v0}.
DrivingFunction make_radial_sle0(double rho, double v0);
/// v_t - w_t along radial SLE_0(rho).
double radial_sle0_gap(double rho, double v0, double t);

/// Chordal SLE_0(-4) with interior force point z0 (logarithmic spiral).
DrivingFunction make_chordal_sle0_spiral(cplx z0);

enum class Orientation { Positive, Negative };

/// Whole-plane SLE_0(rho), rho <= -2, exposed on [t_min, T]; t_min defaults
/// to T - 20. For rho = -2 the force-point angle v0 is required.
DrivingFunction make_wholeplane_sle0(double rho, double theta, double T,
                                     Orientation orientation,
                                     std::optional<double> v0_for_minus2 = std::nullopt,
                                     std::optional<double> t_min = std::nullopt);

/// SLE_0(rho) with force point at 0+: a ray at angle pi (2+rho)/(4+rho).
DrivingFunction make_ray(double rho);
double ray_angle(double rho);

/// W_t = sum_k a_k sin(omega_k t) + b t, a smooth band-limited driving with
/// W_0 = 0. Used for randomized test instances.
DrivingFunction make_sine_series(Setting setting, std::vector<double> amplitudes,
                                 std::vector<double> frequencies, double slope = 0.0,
                                 std::string family = "sine-series");

/// base(t) + extra(t) with analytic derivatives when both have them.
DrivingFunction add(const DrivingFunction& base, const DrivingFunction& extra);

/// Samples `f` on n+1 uniform points of [start, T] as `t,value` rows.
struct DrivingSamples {
  std::vector<double> t, value;
};
DrivingSamples sample_uniform(const DrivingFunction& f, double T, std::size_t n);

}  // namespace slerho
