#pragma once

#include "tomoqubo/geometry.hpp"
#include "tomoqubo/image.hpp"

namespace tomoqubo {

struct SartConfig {
  int iterations = 6;
  double relaxation = 1.0;

  void validate() const;
};

/// Discrete ramp filter response (2x the Ram-Lak kernel spectrum) for a
/// zero-padded length `padded`.
Eigen::VectorXd ramp_filter_response(int padded);

/// Filtered back projection: each projection is zero-padded to a power of
/// two >= 2 * bins (at least 64), multiplied by the ramp response in the
/// frequency domain, then back projected with linear interpolation and scaled
/// by pi / (2 * angles). Output is not clipped.
Image fbp(const Sinogram& sino, const ProjectionGeometry& geom);

/// SART from a zero image. Each iteration sweeps the angles in order; per
/// angle the residual of every ray is normalized by the ray's weight sum,
/// back-distributed along the weights, and divided by the pixel's weight sum
/// within that angle.
Image sart(const Sinogram& sino, const SystemMatrix& sm, const SartConfig& config = {});

}  // namespace tomoqubo
