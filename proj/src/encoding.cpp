#include "tomoqubo/encoding.hpp"

#include "tomoqubo/error.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace tomoqubo {

namespace {

std::string describe(double v) { return format_real(v); }

[[noreturn]] void unrepresentable(double value, std::size_t row, std::size_t col,
                                  const char* scheme) {
  std::ostringstream msg;
  msg << "pixel (" << row << ", " << col << ") value " << describe(value)
      << " is not representable by the " << scheme << " encoding";
  throw EncodingError(msg.str(), row, col, value);
}

// Decoded value of `bits`, summed in bit order exactly as decode() does.
double weighted_sum(const std::vector<double>& coeffs, const std::vector<std::uint8_t>& bits) {
  double v = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (bits[k]) v += coeffs[k];
  return v;
}

}  // namespace

EncodingScheme EncodingScheme::radix2(int m1, int m2) {
  if (m1 + m2 + 1 < 1) throw std::invalid_argument("radix2 needs m1 + m2 + 1 >= 1");
  if (m1 + m2 + 1 > 52) throw std::invalid_argument("radix2 range exceeds double precision");
  EncodingScheme s;
  s.kind_ = EncodingKind::radix2;
  s.m1_ = m1;
  s.m2_ = m2;
  for (int k = -m1; k <= m2; ++k) s.coefficients_.push_back(std::ldexp(1.0, k));
  return s;
}

EncodingScheme EncodingScheme::mac(const MacLevels& levels) {
  EncodingScheme s;
  s.kind_ = EncodingKind::mac;
  s.levels_.assign(levels.values().begin(), levels.values().end());
  s.coefficients_ = s.levels_;
  return s;
}

EncodingScheme EncodingScheme::mac_difference(const MacLevels& levels) {
  EncodingScheme s;
  s.kind_ = EncodingKind::mac_difference;
  s.levels_.assign(levels.values().begin(), levels.values().end());
  // beta_k = alpha_k - alpha_{k-1}, nudged by ulps where needed so that the
  // running sum beta_1 + ... + beta_k rounds to alpha_k exactly.
  double prefix = 0.0;
  for (double level : s.levels_) {
    double beta = level - prefix;
    for (int step = 0; prefix + beta != level && step < 8; ++step)
      beta = std::nextafter(beta, prefix + beta < level ? HUGE_VAL : -HUGE_VAL);
    if (prefix + beta != level)
      throw std::invalid_argument("MAC level " + format_real(level) +
                                  " cannot be reached as an exact sum of level differences");
    s.coefficients_.push_back(beta);
    prefix += beta;
  }
  return s;
}

std::vector<std::uint8_t> EncodingScheme::encode_value(double value, std::size_t row,
                                                       std::size_t col) const {
  const std::size_t n = coefficients_.size();
  std::vector<std::uint8_t> bits(n, 0);
  if (value == 0.0) return bits;

  switch (kind_) {
    case EncodingKind::radix2: {
      const double steps = std::ldexp(value, m1_);
      if (!(steps >= 0.0) || steps != std::floor(steps) || steps >= std::ldexp(1.0, static_cast<int>(n)))
        unrepresentable(value, row, col, "radix2");
      auto integer = static_cast<std::uint64_t>(steps);
      for (std::size_t k = 0; k < n; ++k) bits[k] = (integer >> k) & 1u;
      break;
    }
    case EncodingKind::mac: {
      for (std::size_t k = 0; k < n; ++k) {
        if (levels_[k] == value) {
          bits[k] = 1;
          return bits;
        }
      }
      unrepresentable(value, row, col, "mac");
    }
    case EncodingKind::mac_difference: {
      for (std::size_t t = 0; t < n; ++t) {
        bits[t] = 1;
        if (weighted_sum(coefficients_, bits) == value) return bits;
      }
      unrepresentable(value, row, col, "mac_difference");
    }
  }
  if (weighted_sum(coefficients_, bits) != value)
    unrepresentable(value, row, col, to_string(kind_).c_str());
  return bits;
}

std::string to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::radix2: return "radix2";
    case EncodingKind::mac: return "mac";
    case EncodingKind::mac_difference: return "mac_difference";
  }
  return "unknown";
}

EncodingKind parse_encoding_kind(std::string_view name) {
  if (name == "radix2") return EncodingKind::radix2;
  if (name == "mac") return EncodingKind::mac;
  if (name == "mac_difference" || name == "mac-difference") return EncodingKind::mac_difference;
  throw std::invalid_argument("unknown encoding '" + std::string(name) + "'");
}

VariableMap::VariableMap(int width, int height, int bits_per_pixel)
    : width_(width), height_(height), bits_(bits_per_pixel) {
  if (width < 1 || height < 1 || bits_per_pixel < 1)
    throw std::invalid_argument("variable map dimensions must be positive");
}

Eigen::SparseMatrix<double, Eigen::RowMajor, int> expansion_matrix(const EncodingScheme& scheme,
                                                                   const VariableMap& map) {
  if (scheme.bits_per_pixel() != map.bits_per_pixel())
    throw std::invalid_argument("encoding and variable map disagree on bits per pixel");
  const auto& c = scheme.coefficients();
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(map.total_vars()));
  for (int p = 0; p < map.num_pixels(); ++p)
    for (int k = 0; k < map.bits_per_pixel(); ++k)
      triplets.emplace_back(p, p * map.bits_per_pixel() + k, c[static_cast<std::size_t>(k)]);
  Eigen::SparseMatrix<double, Eigen::RowMajor, int> e(map.num_pixels(),
                                                      static_cast<int>(map.total_vars()));
  e.setFromTriplets(triplets.begin(), triplets.end());
  return e;
}

Image decode(const Bits& bits, const EncodingScheme& scheme, const VariableMap& map) {
  if (bits.size() != map.total_vars())
    throw std::invalid_argument("bitstring length does not match the variable map");
  if (scheme.bits_per_pixel() != map.bits_per_pixel())
    throw std::invalid_argument("encoding and variable map disagree on bits per pixel");
  const auto& c = scheme.coefficients();
  Image img(map.height(), map.width());
  for (int i = 0; i < map.height(); ++i) {
    for (int j = 0; j < map.width(); ++j) {
      double v = 0.0;
      for (int k = 0; k < map.bits_per_pixel(); ++k)
        if (bits(map.index(i, j, k))) v += c[static_cast<std::size_t>(k)];
      img(i, j) = v;
    }
  }
  return img;
}

Bits encode_ground_truth(const Image& img, const EncodingScheme& scheme) {
  const VariableMap map(static_cast<int>(img.cols()), static_cast<int>(img.rows()),
                        scheme.bits_per_pixel());
  Bits bits = Bits::Zero(map.total_vars());
  for (int i = 0; i < map.height(); ++i) {
    for (int j = 0; j < map.width(); ++j) {
      const auto pixel = scheme.encode_value(img(i, j), static_cast<std::size_t>(i),
                                             static_cast<std::size_t>(j));
      for (int k = 0; k < map.bits_per_pixel(); ++k)
        bits(map.index(i, j, k)) = pixel[static_cast<std::size_t>(k)];
    }
  }
  return bits;
}

std::string format_bitstring(const Bits& bits) {
  std::string out;
  out.reserve(static_cast<std::size_t>(bits.size()) + 1);
  for (Eigen::Index k = 0; k < bits.size(); ++k) out += bits(k) ? '1' : '0';
  out += '\n';
  return out;
}

Bits parse_bitstring(std::string_view text) {
  if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
  Bits bits(static_cast<Eigen::Index>(text.size()));
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] != '0' && text[k] != '1')
      throw ParseError("bitstring: invalid character at byte offset " + std::to_string(k), k,
                       false);
    bits(static_cast<Eigen::Index>(k)) = text[k] == '1';
  }
  return bits;
}

Bits load_bitstring(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_bitstring(text);
}

void save_bitstring(const Bits& bits, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_bitstring(bits);
}

}  // namespace tomoqubo
