#pragma once

#include "tomoqubo/image.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tomoqubo {

/// Binary assignment, one entry (0 or 1) per QUBO variable.
using Bits = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

enum class EncodingKind { radix2, mac, mac_difference };

/// How a pixel value is spelled in binary variables: value = sum_k c_k q_k.
///
/// - radix2: c_k = 2^k for k = -m1..m2.
/// - mac: c_k = a_k, one variable per attenuation level (one-hot truth).
/// - mac_difference: c_1 = a_1, c_k = a_k - a_{k-1}; ground truth uses the
///   thermometer pattern (level a_t sets the first t bits).
class EncodingScheme {
 public:
  static EncodingScheme radix2(int m1, int m2);
  static EncodingScheme mac(const MacLevels& levels);
  static EncodingScheme mac_difference(const MacLevels& levels);

  EncodingKind kind() const noexcept { return kind_; }
  int m1() const noexcept { return m1_; }
  int m2() const noexcept { return m2_; }
  /// Attenuation levels for the mac kinds; empty for radix2.
  const std::vector<double>& levels() const noexcept { return levels_; }

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  int bits_per_pixel() const noexcept { return static_cast<int>(coefficients_.size()); }

  /// Canonical bit pattern of a single pixel value; throws EncodingError
  /// (with row/col filled in by the caller's context) if unrepresentable.
  std::vector<std::uint8_t> encode_value(double value, std::size_t row = 0,
                                         std::size_t col = 0) const;

 private:
  EncodingScheme() = default;

  EncodingKind kind_ = EncodingKind::mac_difference;
  int m1_ = 0;
  int m2_ = 0;
  std::vector<double> levels_;
  std::vector<double> coefficients_;
};

std::string to_string(EncodingKind kind);
/// Accepts "radix2", "mac", "mac_difference" (also "mac-difference").
EncodingKind parse_encoding_kind(std::string_view name);

/// Per-bit multipliers of a scheme.
inline const std::vector<double>& coefficients(const EncodingScheme& scheme) {
  return scheme.coefficients();
}

/// Flat variable indexing: index(i, j, k) = (i * width + j) * bits + k.
class VariableMap {
 public:
  VariableMap(int width, int height, int bits_per_pixel);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int bits_per_pixel() const noexcept { return bits_; }
  int num_pixels() const noexcept { return width_ * height_; }
  Eigen::Index total_vars() const noexcept {
    return static_cast<Eigen::Index>(width_) * height_ * bits_;
  }

  Eigen::Index index(int row, int col, int bit) const noexcept {
    return (static_cast<Eigen::Index>(row) * width_ + col) * bits_ + bit;
  }

 private:
  int width_;
  int height_;
  int bits_;
};

/// Linear map from variables to pixel values, sized pixels x total_vars:
/// E(p, index(p, k)) = c_k. decode(q) == E * q.
Eigen::SparseMatrix<double, Eigen::RowMajor, int> expansion_matrix(
    const EncodingScheme& scheme, const VariableMap& map);

/// pixel(i, j) = sum_k c_k * bits[index(i, j, k)], reported as-is.
Image decode(const Bits& bits, const EncodingScheme& scheme, const VariableMap& map);

/// Canonical encoding of an image whose pixels are all representable.
Bits encode_ground_truth(const Image& img, const EncodingScheme& scheme);

/// One line of '0'/'1' characters, LF-terminated.
std::string format_bitstring(const Bits& bits);
Bits parse_bitstring(std::string_view text);
Bits load_bitstring(const std::filesystem::path& path);
void save_bitstring(const Bits& bits, const std::filesystem::path& path);

}  // namespace tomoqubo
