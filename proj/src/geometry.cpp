#include "tomoqubo/geometry.hpp"

#include "tomoqubo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>

namespace tomoqubo {

namespace {

constexpr double kDirectionSnap = 1e-12;
constexpr double kBoundaryTol = 1e-9;
constexpr double kMinSegment = 1e-12;

std::pair<double, double> detector_axis(double angle_deg) {
  const double rad = angle_deg * std::numbers::pi / 180.0;
  double c = std::cos(rad);
  double s = std::sin(rad);
  if (std::abs(c) < kDirectionSnap) c = 0.0;
  if (std::abs(s) < kDirectionSnap) s = 0.0;
  return {c, s};
}

// Parametric range [lo, hi] of o + t*d inside [0, extent]; false if missed.
bool clip_axis(double o, double d, double extent, double& lo, double& hi) {
  if (d == 0.0) return o >= 0.0 && o <= extent;
  double a = (0.0 - o) / d;
  double b = (extent - o) / d;
  if (a > b) std::swap(a, b);
  lo = std::max(lo, a);
  hi = std::min(hi, b);
  return true;
}

void add_grid_crossings(double o, double d, int extent, double lo, double hi,
                        std::vector<double>& out) {
  if (d == 0.0) return;
  for (int k = 0; k <= extent; ++k) {
    const double t = (k - o) / d;
    if (t > lo && t < hi) out.push_back(t);
  }
}

// Cells touched by coordinate v: one cell normally, two halves on a boundary.
int cells_at(double v, int extent, int (&cell)[2], double (&share)[2]) {
  const double nearest = std::round(v);
  if (std::abs(v - nearest) < kBoundaryTol) {
    int n = 0;
    const int k = static_cast<int>(nearest);
    for (int c : {k - 1, k}) {
      if (c >= 0 && c < extent) {
        cell[n] = c;
        share[n] = 0.5;
        ++n;
      }
    }
    return n;
  }
  const int c = static_cast<int>(std::floor(v));
  if (c < 0 || c >= extent) return 0;
  cell[0] = c;
  share[0] = 1.0;
  return 1;
}

}  // namespace

ProjectionGeometry ProjectionGeometry::with_default_detector(int width, int height,
                                                             std::vector<double> angles_deg) {
  ProjectionGeometry g;
  g.image_width = width;
  g.image_height = height;
  g.angles_deg = std::move(angles_deg);
  g.detector_bins = default_detector_bins(width, height);
  g.bin_width = kDefaultBinWidth;
  g.validate();
  return g;
}

void ProjectionGeometry::validate() const {
  if (image_width < 1 || image_height < 1)
    throw std::invalid_argument("geometry image size must be positive");
  if (detector_bins < 1) throw std::invalid_argument("detector_bins must be positive");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw std::invalid_argument("bin_width must be positive");
  if (angles_deg.empty()) throw std::invalid_argument("geometry needs at least one angle");
  for (std::size_t k = 0; k < angles_deg.size(); ++k) {
    const double a = angles_deg[k];
    if (!(a >= 0.0 && a < 180.0)) throw std::invalid_argument("angles must lie in [0, 180)");
    if (k > 0 && a <= angles_deg[k - 1])
      throw std::invalid_argument("angles must be strictly increasing");
  }
}

bool ProjectionGeometry::covers_image() const {
  return detector_bins * bin_width >=
         std::hypot(static_cast<double>(image_width), static_cast<double>(image_height));
}

std::vector<double> isometric_angles(int count) {
  if (count < 1) throw std::invalid_argument("projection count must be >= 1");
  std::vector<double> angles(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) angles[static_cast<std::size_t>(k)] = 180.0 * k / count;
  return angles;
}

int default_detector_bins(int width, int height, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be positive");
  const int n =
      static_cast<int>(std::ceil(std::numbers::sqrt2 * std::max(width, height) / bin_width - 1e-9));
  return n % 2 == 0 ? n + 1 : n;
}

std::vector<std::pair<int, double>> trace_ray(const ProjectionGeometry& geom,
                                              int angle_index, int bin) {
  const auto [ux, uy] = detector_axis(geom.angles_deg.at(static_cast<std::size_t>(angle_index)));
  const double dx = -uy;
  const double dy = ux;
  const double t = geom.bin_offset(bin);
  const double ox = 0.5 * geom.image_width + t * ux;
  const double oy = 0.5 * geom.image_height + t * uy;

  std::vector<std::pair<int, double>> hits;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  if (!clip_axis(ox, dx, geom.image_width, lo, hi)) return hits;
  if (!clip_axis(oy, dy, geom.image_height, lo, hi)) return hits;
  if (!(hi - lo > kMinSegment)) return hits;

  std::vector<double> knots{lo, hi};
  add_grid_crossings(ox, dx, geom.image_width, lo, hi, knots);
  add_grid_crossings(oy, dy, geom.image_height, lo, hi, knots);
  std::sort(knots.begin(), knots.end());

  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double length = knots[k + 1] - knots[k];
    if (length <= kMinSegment) continue;
    const double mid = 0.5 * (knots[k] + knots[k + 1]);
    int cols[2], rows[2];
    double col_share[2], row_share[2];
    const int nc = cells_at(ox + mid * dx, geom.image_width, cols, col_share);
    const int nr = cells_at(oy + mid * dy, geom.image_height, rows, row_share);
    for (int r = 0; r < nr; ++r)
      for (int c = 0; c < nc; ++c)
        hits.emplace_back(rows[r] * geom.image_width + cols[c],
                          length * row_share[r] * col_share[c]);
  }

  std::sort(hits.begin(), hits.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, double>> merged;
  for (const auto& h : hits) {
    if (!merged.empty() && merged.back().first == h.first)
      merged.back().second += h.second;
    else
      merged.push_back(h);
  }
  return merged;
}

SystemMatrix build_system_matrix(const ProjectionGeometry& geom) {
  geom.validate();
  std::vector<Eigen::Triplet<double, int>> triplets;
  for (int a = 0; a < geom.num_angles(); ++a) {
    for (int s = 0; s < geom.detector_bins; ++s) {
      const int row = a * geom.detector_bins + s;
      for (const auto& [pixel, w] : trace_ray(geom, a, s)) triplets.emplace_back(row, pixel, w);
    }
  }
  SystemMatrix sm{geom, {}};
  sm.weights.resize(geom.num_rays(), geom.num_pixels());
  sm.weights.setFromTriplets(triplets.begin(), triplets.end());
  sm.weights.makeCompressed();
  return sm;
}

Sinogram forward_project(const Image& img, const SystemMatrix& sm) {
  const ProjectionGeometry& g = sm.geometry;
  if (img.rows() != g.image_height || img.cols() != g.image_width)
    throw std::invalid_argument("image dimensions do not match the projection geometry");
  const Eigen::Map<const Eigen::VectorXd> pixels(img.data(), img.size());
  const Eigen::VectorXd rays = sm.weights * pixels;
  return Eigen::Map<const Sinogram>(rays.data(), g.num_angles(), g.detector_bins);
}

Sinogram add_noise(const Sinogram& sino, double level, std::uint64_t seed) {
  if (!(level >= 0.0) || !std::isfinite(level))
    throw std::invalid_argument("noise level must be finite and >= 0");
  if (level == 0.0) return sino;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Sinogram out = sino;
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const double v = out.data()[k];
    out.data()[k] = v + level * v * normal(rng);
  }
  return out;
}

std::string format_sinogram_csv(const Sinogram& sino) {
  std::string out = "# angles=" + std::to_string(sino.rows()) +
                    " bins=" + std::to_string(sino.cols()) + "\n";
  for (Eigen::Index i = 0; i < sino.rows(); ++i) {
    for (Eigen::Index j = 0; j < sino.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_real(sino(i, j));
    }
    out += '\n';
  }
  return out;
}

Sinogram parse_sinogram_csv(std::string_view text) {
  const std::size_t eol = text.find('\n');
  const std::string_view header = text.substr(0, eol);
  long angles = 0;
  long bins = 0;
  {
    constexpr std::string_view kAngles = "# angles=";
    constexpr std::string_view kBins = " bins=";
    if (!header.starts_with(kAngles))
      throw ParseError("sinogram: missing '# angles=<a> bins=<b>' header on line 1", 1, true);
    std::string_view rest = header.substr(kAngles.size());
    auto r1 = std::from_chars(rest.data(), rest.data() + rest.size(), angles);
    rest = rest.substr(static_cast<std::size_t>(r1.ptr - rest.data()));
    if (r1.ec != std::errc() || !rest.starts_with(kBins))
      throw ParseError("sinogram: malformed header on line 1", 1, true);
    rest = rest.substr(kBins.size());
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.remove_suffix(1);
    auto r2 = std::from_chars(rest.data(), rest.data() + rest.size(), bins);
    if (r2.ec != std::errc() || r2.ptr != rest.data() + rest.size() || angles < 1 || bins < 1)
      throw ParseError("sinogram: malformed header on line 1", 1, true);
  }
  const std::string_view body =
      eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
  Image values;
  try {
    values = parse_csv_image(body);
  } catch (const ParseError& e) {
    throw ParseError(std::string("sinogram: ") + e.what(), e.offset() + 1, true);
  }
  if (values.rows() != angles || values.cols() != bins)
    throw ParseError("sinogram: body shape does not match header", 1, true);
  if (!values.allFinite()) throw ParseError("sinogram: non-finite value", 1, true);
  return values.matrix();
}

Sinogram load_sinogram(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_sinogram_csv(text);
}

void save_sinogram(const Sinogram& sino, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_sinogram_csv(sino);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace tomoqubo
