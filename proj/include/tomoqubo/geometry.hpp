#pragma once

#include "tomoqubo/image.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tomoqubo {

/// Projection measurements P(theta, s): one row per angle, one column per
/// detector bin.
using Sinogram =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 2D parallel-beam geometry. The image occupies [0, width] x [0, height]
/// with x along columns and y along rows; the detector is centered on the
/// image center. At angle theta the detector axis is (cos theta, sin theta)
/// and rays travel along (-sin theta, cos theta), so theta = 0 gives rays
/// parallel to the columns.
struct ProjectionGeometry {
  int image_width = 0;
  int image_height = 0;
  std::vector<double> angles_deg;
  int detector_bins = 0;
  double bin_width = 1.0;

  /// Geometry with default_detector_bins at kDefaultBinWidth.
  static ProjectionGeometry with_default_detector(int width, int height,
                                                  std::vector<double> angles_deg);

  /// Throws std::invalid_argument on non-positive sizes or angles that are
  /// not strictly increasing within [0, 180).
  void validate() const;

  /// Detector span reaches the image diagonal, so no ray misses mass.
  bool covers_image() const;

  int num_angles() const noexcept { return static_cast<int>(angles_deg.size()); }
  int num_rays() const noexcept { return num_angles() * detector_bins; }
  int num_pixels() const noexcept { return image_width * image_height; }

  /// Signed distance of a bin center from the detector center.
  double bin_offset(int bin) const noexcept {
    return (bin - 0.5 * (detector_bins - 1)) * bin_width;
  }
};

/// (0, d, 2d, ..., 180 - d) with d = 180 / count.
std::vector<double> isometric_angles(int count);

/// Two rays per pixel width: unit-spaced line integrals skip whole pixels at
/// oblique angles and leave small phantoms underdetermined.
inline constexpr double kDefaultBinWidth = 0.5;

/// ceil(sqrt(2) * max(width, height) / bin_width), bumped to the next odd
/// number so the central bin passes through the image center.
int default_detector_bins(int width, int height, double bin_width = kDefaultBinWidth);

/// Ray-pixel intersection lengths. Row r = angle * bins + bin, column = flat
/// row-major pixel index. Pixels a ray does not cross have no entry.
struct SystemMatrix {
  ProjectionGeometry geometry;
  Eigen::SparseMatrix<double, Eigen::RowMajor, int> weights;
};

/// Exact line traversal of one ray through the pixel grid. Returns (pixel,
/// length) pairs sorted by pixel index. A ray running exactly along a pixel
/// boundary contributes half its length to each side.
std::vector<std::pair<int, double>> trace_ray(const ProjectionGeometry& geom,
                                              int angle_index, int bin);

SystemMatrix build_system_matrix(const ProjectionGeometry& geom);

/// P = A * vec(img).
Sinogram forward_project(const Image& img, const SystemMatrix& sm);

/// Multiplicative Gaussian noise: v + level * v * z, z ~ N(0, 1) drawn from a
/// generator seeded with `seed`, visiting entries in row-major order.
Sinogram add_noise(const Sinogram& sino, double level, std::uint64_t seed);

/// CSV with a "# angles=<a> bins=<b>" header line, one row per angle.
std::string format_sinogram_csv(const Sinogram& sino);
Sinogram parse_sinogram_csv(std::string_view text);
Sinogram load_sinogram(const std::filesystem::path& path);
void save_sinogram(const Sinogram& sino, const std::filesystem::path& path);

}  // namespace tomoqubo
