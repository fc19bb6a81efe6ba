#include "tomoqubo/baselines.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace tomoqubo {

void SartConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("SART iterations must be >= 1");
  if (!(relaxation > 0.0 && relaxation <= 2.0))
    throw std::invalid_argument("SART relaxation must lie in (0, 2]");
}

Eigen::VectorXd ramp_filter_response(int padded) {
  // Spatial Ram-Lak kernel: 1/4 at 0, -1/(pi k)^2 at odd k, 0 at even k, with
  // k the circular distance from the origin.
  std::vector<double> kernel(static_cast<std::size_t>(padded), 0.0);
  kernel[0] = 0.25;
  for (int k = 1; k < padded; ++k) {
    const int d = std::min(k, padded - k);
    if (d % 2 == 1) kernel[static_cast<std::size_t>(k)] = -1.0 / std::pow(std::numbers::pi * d, 2);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, kernel);
  Eigen::VectorXd response(padded);
  for (int k = 0; k < padded; ++k) response(k) = 2.0 * spectrum[static_cast<std::size_t>(k)].real();
  return response;
}

Image fbp(const Sinogram& sino, const ProjectionGeometry& geom) {
  geom.validate();
  if (sino.rows() != geom.num_angles() || sino.cols() != geom.detector_bins)
    throw std::invalid_argument("sinogram shape does not match the projection geometry");

  const int bins = geom.detector_bins;
  int padded = 64;
  while (padded < 2 * bins) padded *= 2;
  const Eigen::VectorXd response = ramp_filter_response(padded);

  Eigen::FFT<double> fft;
  Sinogram filtered(sino.rows(), bins);
  std::vector<double> row(static_cast<std::size_t>(padded));
  std::vector<std::complex<double>> spectrum;
  std::vector<double> back;
  for (Eigen::Index a = 0; a < sino.rows(); ++a) {
    std::fill(row.begin(), row.end(), 0.0);
    for (int s = 0; s < bins; ++s) row[static_cast<std::size_t>(s)] = sino(a, s);
    fft.fwd(spectrum, row);
    for (int k = 0; k < padded; ++k) spectrum[static_cast<std::size_t>(k)] *= response(k);
    fft.inv(back, spectrum);
    for (int s = 0; s < bins; ++s) filtered(a, s) = back[static_cast<std::size_t>(s)] / geom.bin_width;
  }

  Image img = Image::Zero(geom.image_height, geom.image_width);
  const double center = 0.5 * (bins - 1);
  for (int a = 0; a < geom.num_angles(); ++a) {
    const double rad = geom.angles_deg[static_cast<std::size_t>(a)] * std::numbers::pi / 180.0;
    double c = std::cos(rad);
    double s = std::sin(rad);
    if (std::abs(c) < 1e-12) c = 0.0;
    if (std::abs(s) < 1e-12) s = 0.0;
    for (int i = 0; i < geom.image_height; ++i) {
      const double y = i + 0.5 - 0.5 * geom.image_height;
      for (int j = 0; j < geom.image_width; ++j) {
        const double x = j + 0.5 - 0.5 * geom.image_width;
        const double pos = (x * c + y * s) / geom.bin_width + center;
        const double lo = std::floor(pos);
        const double frac = pos - lo;
        const auto k = static_cast<int>(lo);
        double v = 0.0;
        if (k >= 0 && k < bins) v += (1.0 - frac) * filtered(a, k);
        if (k + 1 >= 0 && k + 1 < bins) v += frac * filtered(a, k + 1);
        img(i, j) += v;
      }
    }
  }
  return img * (std::numbers::pi / (2.0 * geom.num_angles()));
}

Image sart(const Sinogram& sino, const SystemMatrix& sm, const SartConfig& config) {
  config.validate();
  const ProjectionGeometry& g = sm.geometry;
  if (sino.rows() != g.num_angles() || sino.cols() != g.detector_bins)
    throw std::invalid_argument("sinogram shape does not match the projection geometry");

  const int bins = g.detector_bins;
  const Eigen::VectorXd measured = Eigen::Map<const Eigen::VectorXd>(sino.data(), sino.size());
  const Eigen::VectorXd ray_sums = sm.weights * Eigen::VectorXd::Ones(g.num_pixels());

  std::vector<Eigen::VectorXd> pixel_sums;
  pixel_sums.reserve(static_cast<std::size_t>(g.num_angles()));
  for (int a = 0; a < g.num_angles(); ++a)
    pixel_sums.push_back(sm.weights.middleRows(a * bins, bins).transpose() * Eigen::VectorXd::Ones(bins));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(g.num_pixels());
  for (int it = 0; it < config.iterations; ++it) {
    for (int a = 0; a < g.num_angles(); ++a) {
      const auto rows = sm.weights.middleRows(a * bins, bins);
      Eigen::VectorXd residual = measured.segment(a * bins, bins) - rows * x;
      const auto sums = ray_sums.segment(a * bins, bins);
      for (int s = 0; s < bins; ++s) residual(s) = sums(s) > 0.0 ? residual(s) / sums(s) : 0.0;
      const Eigen::VectorXd correction = rows.transpose() * residual;
      const Eigen::VectorXd& norm = pixel_sums[static_cast<std::size_t>(a)];
      for (Eigen::Index p = 0; p < x.size(); ++p)
        if (norm(p) > 0.0) x(p) += config.relaxation * correction(p) / norm(p);
    }
  }
  return Eigen::Map<const Image>(x.data(), g.image_height, g.image_width);
}

}  // namespace tomoqubo
