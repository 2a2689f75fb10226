#pragma once

#include <cmath>
#include <limits>

#include "slerho/driving.hpp"
#include "slerho/geometry.hpp"

namespace slerho {

/// Harmonic angle fields whose flow-lines are SLE_0(rho) curves.
struct FlowField {
  enum class Kind { BoundaryChordal, InteriorChordal, WholePlane, WholePlaneMinus2 };

  Kind kind = Kind::BoundaryChordal;
  double rho = 0;
  cplx force{0, 0};    ///< x0 (real) or z0
  double constant = 0; ///< additive constant of the rho = -2 whole-plane field

  static FlowField boundary(double rho, double x0);
  static FlowField interior(double rho, cplx z0);
  /// ((6 + rho) / 4) arg z + pi, rho < -2.
  static FlowField wholeplane(double rho);
  /// arg z + C with C = 3 pi / 2 - v0 / 2.
  static FlowField wholeplane_minus2(double v0);

  /// Point where the field is singular besides the origin (the force point),
  /// if any.
  bool has_force_singularity() const {
    return kind == Kind::BoundaryChordal || kind == Kind::InteriorChordal;
  }
  bool in_upper_half_plane() const { return has_force_singularity(); }
};

/// Lifted arguments carried along a path. NaN means "not yet fixed": the
/// first evaluation picks the principal value (or theta + pi for the
/// interior force term).
struct BranchState {
  double arg_z = std::numeric_limits<double>::quiet_NaN();
  double arg_force = std::numeric_limits<double>::quiet_NaN();
};

struct FieldValue {
  double angle;
  BranchState branch;
};

/// Evaluates the field at z, continuing the lifted arguments from `branch`.
/// Throws BranchJump when a lifted argument moves by more than pi / 2.
FieldValue field_eval(const FlowField& field, cplx z, const BranchState& branch = {});

struct FlowlineOptions {
  double ds = 1e-3;              ///< nominal arc-length step
  std::size_t max_steps = 200000;
  /// Steps are capped at this fraction of the distance to the nearest
  /// singularity.
  double singular_fraction = 0.05;
  /// Stop when within this fraction of the start scale of a singularity.
  double stop_rel = 1e-6;
  /// Stop once the arc length exceeds this value.
  double max_length = std::numeric_limits<double>::infinity();
};

enum class FlowStop { MaxSteps, MaxLength, LeftDomain, ReachedSingularity };
std::string to_string(FlowStop s);

struct Flowline {
  Curve curve;  ///< arc-length parametrized
  FlowStop stop = FlowStop::MaxSteps;
  BranchState branch;
};

/// RK4 on eta' = exp(i h(eta)).
Flowline integrate_flowline(const FlowField& field, cplx start, const FlowlineOptions& opts = {},
                            const BranchState& branch = {});

/// Standard boundary start i * 1e-4 * |x0|.
cplx boundary_flowline_start(double x0);

/// Symmetric Hausdorff distance between polylines.
double curve_distance(const Curve& a, const Curve& b);

/// Prefix of `c` up to its vertex closest to `p`.
Curve truncate_near(const Curve& c, cplx p);

}  // namespace slerho
