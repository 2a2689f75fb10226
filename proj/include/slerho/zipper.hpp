#pragma once

#include <vector>

#include "slerho/driving.hpp"
#include "slerho/geometry.hpp"

namespace slerho {

struct ZipperOptions {
  /// Reject curves whose capacity increments exceed `spacing_factor` times
  /// the median increment (IrregularSpacing).
  bool spacing_guard = true;
  double spacing_factor = 10;
  /// Measure the roundtrip residual (costs one trace of the extracted drive).
  bool compute_residual = true;
  /// Steps of the uniform re-trace used for the residual (0: twice the
  /// number of segments).
  std::size_t residual_steps = 0;
};

struct ZipperResult {
  DrivingFunction drive;
  std::vector<double> capacity_times;  ///< one per vertex, starting at 0
  double residual = -1;                ///< Hausdorff(input, trace(drive)), -1 if skipped
};

/// Vertical-slit (half-plane) or radial-slit (disk) zipper. The curve must
/// start on the boundary (the real line, or the unit circle) and stay in
/// the open domain afterwards. Consecutive coincident vertices are an error.
ZipperResult extract_driving(const Curve& curve, Setting setting, const ZipperOptions& opts = {});

/// Resamples the curve at `n` + 1 points uniformly spaced in capacity (or
/// conformal-radius) time; n = 0 keeps the vertex count.
Curve capacity_reparametrize(const Curve& curve, Setting setting = Setting::ChordalHalfPlane,
                             std::size_t n = 0);

}  // namespace slerho
