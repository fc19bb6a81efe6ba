#pragma once

#include "tomoqubo/encoding.hpp"
#include "tomoqubo/geometry.hpp"
#include "tomoqubo/image.hpp"
#include "tomoqubo/qubo.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace tomoqubo::testing {

inline Image random_quantized(std::mt19937_64& rng, int width, int height,
                              const std::vector<double>& levels) {
  std::uniform_int_distribution<std::size_t> pick(0, levels.size());
  Image img(height, width);
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const std::size_t k = pick(rng);
    img.reshaped<Eigen::RowMajor>()(i) = k == 0 ? 0.0 : levels[k - 1];
  }
  return img;
}

/// Blocky phantom: a few random axis-aligned rectangles, closer to real
/// samples than independent pixel noise.
inline Image random_blocks(std::mt19937_64& rng, int width, int height,
                           const std::vector<double>& levels, int count = 3) {
  Image img = Image::Zero(height, width);
  std::uniform_int_distribution<int> lv(0, static_cast<int>(levels.size()) - 1);
  for (int n = 0; n < count; ++n) {
    std::uniform_int_distribution<int> r0(0, height - 1), c0(0, width - 1);
    const int r = r0(rng), c = c0(rng);
    std::uniform_int_distribution<int> hh(1, height - r), ww(1, width - c);
    img.block(r, c, hh(rng), ww(rng)).setConstant(levels[static_cast<std::size_t>(lv(rng))]);
  }
  return img;
}

inline Bits random_bits(std::mt19937_64& rng, Eigen::Index n) {
  Bits b(n);
  for (Eigen::Index i = 0; i < n; ++i) b(i) = static_cast<std::uint8_t>(rng() & 1U);
  return b;
}

/// Direct energy sum over the term lists, independent of the model's
/// vectorised evaluation.
inline double energy_by_terms(const QuboModel& model, const Bits& bits) {
  double e = model.offset();
  for (const auto& t : model.linear_terms()) e += t.coeff * bits(t.var);
  for (const auto& t : model.quadratic_terms()) e += t.coeff * bits(t.i) * bits(t.j);
  return e;
}

/// Squared neighbour differences by explicit loops.
inline double tv_squared_loops(const Image& img) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < img.rows(); ++i)
    for (Eigen::Index j = 0; j < img.cols(); ++j) {
      if (j + 1 < img.cols()) s += std::pow(img(i, j) - img(i, j + 1), 2);
      if (i + 1 < img.rows()) s += std::pow(img(i, j) - img(i + 1, j), 2);
    }
  return s;
}

inline double sum_squares(const Sinogram& s) {
  double t = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j) t += s(i, j) * s(i, j);
  return t;
}

/// Length of the chord a ray cuts through the image box, by slab clipping.
inline double chord_length(const ProjectionGeometry& g, int angle, int bin) {
  const double th = g.angles_deg[static_cast<std::size_t>(angle)] * std::acos(-1.0) / 180.0;
  const double ux = std::cos(th), uy = std::sin(th);
  const double dx = -uy, dy = ux;
  const double t = g.bin_offset(bin);
  const double ox = 0.5 * g.image_width + t * ux, oy = 0.5 * g.image_height + t * uy;
  double lo = -1e300, hi = 1e300;
  auto clip = [&](double o, double d, double extent) {
    if (std::abs(d) < 1e-12) {
      if (o < 0.0 || o > extent) hi = lo - 1.0;
      return;
    }
    double a = (0.0 - o) / d, b = (extent - o) / d;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  };
  clip(ox, dx, g.image_width);
  clip(oy, dy, g.image_height);
  return hi > lo ? hi - lo : 0.0;
}

inline bool near_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("tomoqubo_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace tomoqubo::testing
