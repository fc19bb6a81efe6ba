#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tomoqubo {

/// A 2D image, row-major, templated on scalar. rows() is the height and
/// cols() the width; pixel (i, j) is row i, column j, flat index i*width + j.
template <typename Scalar>
using ImageT =
    Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Pixel attenuation values in MAC units.
using Image = ImageT<double>;

/// Strictly increasing, positive attenuation levels a_1 < ... < a_m.
class MacLevels {
 public:
  /// Throws std::invalid_argument unless non-empty, positive and strictly
  /// increasing.
  explicit MacLevels(std::vector<double> levels);

  std::span<const double> values() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  double operator[](std::size_t k) const { return levels_[k]; }
  double max() const noexcept { return levels_.back(); }

  /// True when v is 0 or one of the levels.
  bool contains(double v) const noexcept;

 private:
  std::vector<double> levels_;
};

/// One ellipse of an analytic phantom, in normalized [-1, 1]^2 coordinates
/// with y pointing up. `angle_deg` rotates counter-clockwise.
struct Ellipse {
  double intensity;
  double semi_axis_x;
  double semi_axis_y;
  double center_x;
  double center_y;
  double angle_deg;
};

/// Ten-ellipse Shepp-Logan table with the modified (Toft) intensities, which
/// keep every value in [0, 1].
std::span<const Ellipse> shepp_logan_ellipses();

/// Rasterizes a set of ellipses by sampling pixel centers. Negative sums are
/// clamped to 0.
Image rasterize_ellipses(int size, std::span<const Ellipse> ellipses);

/// size x size Shepp-Logan phantom, values in [0, 1]. Requires size >= 2.
Image shepp_logan(int size);

/// Area-average resampling to width x height.
Image resize_area(const Image& img, int width, int height);

/// Separable Gaussian blur, kernel truncated at ceil(3 sigma), border pixels
/// clamped. sigma == 0 returns the input.
Image gaussian_blur(const Image& img, double sigma);

/// Maps each pixel to 0 or a level: below thresholds[0] gives 0, and
/// [thresholds[k-1], thresholds[k]) gives levels[k-1]; at or above the last
/// threshold gives the last level.
Image quantize(const Image& img, const MacLevels& levels,
               std::span<const double> thresholds);

/// Midpoints between consecutive values of {0} U levels, expressed in the
/// units of `img` after mapping its [min, max] range onto [0, levels.max()].
std::vector<double> default_thresholds(const Image& img,
                                       const MacLevels& levels);

/// Blur-then-quantize preparation of a high-resolution source: area resize to
/// size x size, Gaussian blur, quantize. Empty thresholds use
/// default_thresholds on the blurred image.
Image prepare_phantom(const Image& source, int size, double blur_sigma,
                      const MacLevels& levels,
                      std::span<const double> thresholds = {});

/// True when every pixel is 0 or a member of `levels`.
bool is_quantized(const Image& img, const MacLevels& levels);

/// Validates the Image invariants: non-empty, every pixel finite and >= 0.
void check_image(const Image& img);

// File I/O. Format is chosen from the extension: ".pgm" (binary P5, maxval
// 255) or ".csv" (one row per line, comma-separated reals, LF endings).

Image load_image(const std::filesystem::path& path);
void save_image(const Image& img, const std::filesystem::path& path);

Image parse_pgm(std::span<const unsigned char> bytes);
std::vector<unsigned char> format_pgm(const Image& img);
Image parse_csv_image(std::string_view text);
std::string format_csv_image(const Image& img);

/// Shortest decimal string that round-trips to `v`.
std::string format_real(double v);

}  // namespace tomoqubo
