#include "tomoqubo/image.hpp"

#include "tomoqubo/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

namespace tomoqubo {

MacLevels::MacLevels(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("MAC levels must be non-empty");
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (!std::isfinite(levels_[k]) || levels_[k] <= 0.0)
      throw std::invalid_argument("MAC levels must be positive and finite");
    if (k > 0 && levels_[k] <= levels_[k - 1])
      throw std::invalid_argument("MAC levels must be strictly increasing");
  }
}

bool MacLevels::contains(double v) const noexcept {
  return v == 0.0 || std::find(levels_.begin(), levels_.end(), v) != levels_.end();
}

namespace {

constexpr std::array<Ellipse, 10> kSheppLogan{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

// Row i of the result holds the area weights of output cell i over the source
// cells, normalized to sum 1.
Eigen::MatrixXd area_weights(int out, int in) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(out, in);
  const double scale = static_cast<double>(in) / out;
  for (int o = 0; o < out; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    for (int s = static_cast<int>(std::floor(lo)); s < in && s < hi; ++s) {
      const double overlap = std::min<double>(hi, s + 1) - std::max<double>(lo, s);
      if (overlap > 0.0) w(o, s) = overlap / scale;
    }
  }
  return w;
}

// Convolution with a truncated Gaussian as an n x n matrix; out-of-range taps
// are folded onto the nearest border sample.
Eigen::MatrixXd blur_operator(int n, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  Eigen::VectorXd taps(2 * radius + 1);
  for (int t = -radius; t <= radius; ++t)
    taps(t + radius) = std::exp(-0.5 * (t * t) / (sigma * sigma));
  taps /= taps.sum();

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int t = -radius; t <= radius; ++t)
      k(i, std::clamp(i + t, 0, n - 1)) += taps(t + radius);
  return k;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

std::span<const Ellipse> shepp_logan_ellipses() { return kSheppLogan; }

Image rasterize_ellipses(int size, std::span<const Ellipse> ellipses) {
  if (size < 1) throw std::invalid_argument("raster size must be positive");
  Image img = Image::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    const double y = 1.0 - (2.0 * i + 1.0) / size;
    for (int j = 0; j < size; ++j) {
      const double x = (2.0 * j + 1.0) / size - 1.0;
      double v = 0.0;
      for (const Ellipse& e : ellipses) {
        const double phi = e.angle_deg * std::numbers::pi / 180.0;
        const double dx = x - e.center_x;
        const double dy = y - e.center_y;
        const double u = (dx * std::cos(phi) + dy * std::sin(phi)) / e.semi_axis_x;
        const double w = (-dx * std::sin(phi) + dy * std::cos(phi)) / e.semi_axis_y;
        if (u * u + w * w <= 1.0) v += e.intensity;
      }
      // Sums such as 1 - 0.8 - 0.2 land a few ulps below zero.
      img(i, j) = std::abs(v) < 1e-12 ? 0.0 : std::max(v, 0.0);
    }
  }
  return img;
}

Image shepp_logan(int size) {
  if (size < 2) throw std::invalid_argument("Shepp-Logan size must be >= 2");
  return rasterize_ellipses(size, kSheppLogan);
}

Image resize_area(const Image& img, int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("resize target must be positive");
  if (img.size() == 0) throw std::invalid_argument("cannot resize an empty image");
  const Eigen::MatrixXd rows = area_weights(height, static_cast<int>(img.rows()));
  const Eigen::MatrixXd cols = area_weights(width, static_cast<int>(img.cols()));
  return (rows * img.matrix() * cols.transpose()).array();
}

Image gaussian_blur(const Image& img, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("blur sigma must be finite and >= 0");
  if (sigma == 0.0 || img.size() == 0) return img;
  const Eigen::MatrixXd rows = blur_operator(static_cast<int>(img.rows()), sigma);
  const Eigen::MatrixXd cols = blur_operator(static_cast<int>(img.cols()), sigma);
  return (rows * img.matrix() * cols.transpose()).array();
}

Image quantize(const Image& img, const MacLevels& levels,
               std::span<const double> thresholds) {
  if (thresholds.size() != levels.size())
    throw std::invalid_argument("quantize needs one threshold per level");
  if (!(thresholds[0] > 0.0))
    throw std::invalid_argument("first threshold must be positive");
  if (!std::is_sorted(thresholds.begin(), thresholds.end(), std::less_equal<>()))
    throw std::invalid_argument("thresholds must be strictly increasing");

  return img.unaryExpr([&](double v) {
    const auto above = std::upper_bound(thresholds.begin(), thresholds.end(), v);
    const auto count = static_cast<std::size_t>(above - thresholds.begin());
    return count == 0 ? 0.0 : levels[count - 1];
  });
}

std::vector<double> default_thresholds(const Image& img, const MacLevels& levels) {
  const double lo = img.minCoeff();
  const double hi = img.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  std::vector<double> out;
  out.reserve(levels.size());
  double prev = 0.0;
  for (double level : levels.values()) {
    const double mid = 0.5 * (prev + level) / levels.max();
    out.push_back(lo + mid * span);
    prev = level;
  }
  return out;
}

Image prepare_phantom(const Image& source, int size, double blur_sigma,
                      const MacLevels& levels, std::span<const double> thresholds) {
  Image small = resize_area(source, size, size);
  Image blurred = gaussian_blur(small, blur_sigma);
  if (!thresholds.empty()) return quantize(blurred, levels, thresholds);
  const std::vector<double> defaults = default_thresholds(blurred, levels);
  return quantize(blurred, levels, defaults);
}

bool is_quantized(const Image& img, const MacLevels& levels) {
  return img.unaryExpr([&](double v) { return levels.contains(v) ? 1.0 : 0.0; }).minCoeff() > 0.0;
}

void check_image(const Image& img) {
  if (img.rows() < 1 || img.cols() < 1) throw std::invalid_argument("image must be non-empty");
  if (!img.allFinite()) throw std::invalid_argument("image pixels must be finite");
  if ((img < 0.0).any()) throw std::invalid_argument("image pixels must be >= 0");
}

std::string format_real(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

Image parse_pgm(std::span<const unsigned char> bytes) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("PGM: " + msg + " at byte offset " + std::to_string(pos), pos, false);
  };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&]() -> long {
    skip_space();
    const std::size_t start = pos;
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1'000'000) throw fail("header value too large");
      ++pos;
    }
    if (pos == start) throw fail("expected an unsigned integer");
    return v;
  };

  if (bytes.size() < 2 || bytes[0] != 'P')
    throw fail("missing magic number");
  if (bytes[1] != '5')
    throw UnsupportedFormat("only binary PGM (P5) is supported");
  pos = 2;
  const long width = read_uint();
  const long height = read_uint();
  const long maxval = read_uint();
  if (width < 1 || height < 1) throw fail("image dimensions must be positive");
  if (maxval != 255) throw UnsupportedFormat("only PGM maxval 255 is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw fail("expected whitespace after header");
  ++pos;

  const std::size_t needed = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < needed) {
    pos = bytes.size();
    throw fail("truncated payload, expected " + std::to_string(needed) + " pixel bytes");
  }
  Image img(height, width);
  for (std::size_t k = 0; k < needed; ++k) img.data()[k] = bytes[pos + k];
  return img;
}

std::vector<unsigned char> format_pgm(const Image& img) {
  check_image(img);
  const std::string header = "P5\n" + std::to_string(img.cols()) + " " +
                             std::to_string(img.rows()) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() + static_cast<std::size_t>(img.size()));
  for (Eigen::Index k = 0; k < img.size(); ++k) {
    const double v = img.data()[k];
    if (v > 255.0 || v != std::floor(v))
      throw std::invalid_argument("PGM pixels must be integers in [0, 255]");
    out.push_back(static_cast<unsigned char>(v));
  }
  return out;
}

Image parse_csv_image(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (text.empty()) break;
      throw ParseError("CSV: empty line " + std::to_string(line_no), line_no, true);
    }

    std::vector<double> row;
    while (true) {
      const std::size_t comma = line.find(',');
      std::string_view field = line.substr(0, comma);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw ParseError("CSV: invalid number '" + std::string(field) + "' on line " +
                             std::to_string(line_no),
                         line_no, true);
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("CSV: ragged row on line " + std::to_string(line_no), line_no, true);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("CSV: no rows", 0, true);

  Image img(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      img(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return img;
}

std::string format_csv_image(const Image& img) {
  std::string out;
  for (Eigen::Index i = 0; i < img.rows(); ++i) {
    for (Eigen::Index j = 0; j < img.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_real(img(i, j));
    }
    out += '\n';
  }
  return out;
}

Image load_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext != ".pgm" && ext != ".csv")
    throw UnsupportedFormat("unsupported image format '" + ext + "'");
  const std::string bytes = read_file(path);
  Image img = ext == ".pgm"
                  ? parse_pgm({reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()})
                  : parse_csv_image(bytes);
  check_image(img);
  return img;
}

void save_image(const Image& img, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") {
    const std::vector<unsigned char> bytes = format_pgm(img);
    write_file(path, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
  } else if (ext == ".csv") {
    write_file(path, format_csv_image(img));
  } else {
    throw UnsupportedFormat("unsupported image format '" + ext + "'");
  }
}

}  // namespace tomoqubo
