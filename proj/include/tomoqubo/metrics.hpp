#pragma once

#include "tomoqubo/geometry.hpp"
#include "tomoqubo/image.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace tomoqubo {

/// Sum over pixels of |recon - truth|.
template <typename A, typename B>
double abs_error(const Eigen::ArrayBase<A>& recon, const Eigen::ArrayBase<B>& truth) {
  if (recon.rows() != truth.rows() || recon.cols() != truth.cols())
    throw std::invalid_argument("abs_error: image dimensions differ");
  return (recon.derived() - truth.derived()).abs().sum();
}

/// Sum over horizontally and vertically adjacent pairs of (I_p - I_p')^2.
template <typename D>
double tv_squared(const Eigen::ArrayBase<D>& img) {
  const auto& x = img.derived();
  const Eigen::Index r = x.rows();
  const Eigen::Index c = x.cols();
  double sum = 0.0;
  if (c > 1) sum += (x.rightCols(c - 1) - x.leftCols(c - 1)).square().sum();
  if (r > 1) sum += (x.bottomRows(r - 1) - x.topRows(r - 1)).square().sum();
  return sum;
}

/// Sum over horizontally and vertically adjacent pairs of |I_p - I_p'|.
template <typename D>
double tv_absolute(const Eigen::ArrayBase<D>& img) {
  const auto& x = img.derived();
  const Eigen::Index r = x.rows();
  const Eigen::Index c = x.cols();
  double sum = 0.0;
  if (c > 1) sum += (x.rightCols(c - 1) - x.leftCols(c - 1)).abs().sum();
  if (r > 1) sum += (x.bottomRows(r - 1) - x.topRows(r - 1)).abs().sum();
  return sum;
}

/// Energy of the true image under a * Q1 + b * Q2 for an exact sinogram:
/// -a * sum P^2 + b * tv_squared(phantom).
inline double target_energy(const Image& phantom, const Sinogram& sino, double a, double b) {
  return -a * sino.squaredNorm() + b * tv_squared(phantom);
}

struct ReconstructionReport {
  std::string method;
  std::string scenario;
  int projections = 0;
  double a = 0.0;
  double b = 0.0;
  double abs_error = 0.0;
  double tv_squared = 0.0;
  double tv_absolute = 0.0;
  std::optional<double> achieved_energy;
  std::optional<double> target_energy;
  bool error_free = false;
};

ReconstructionReport make_report(std::string method, std::string scenario, const Image& recon,
                                 const Image& truth, int projections, double a = 0.0,
                                 double b = 0.0, std::optional<double> achieved = std::nullopt,
                                 std::optional<double> target = std::nullopt);

std::string reports_to_json(std::span<const ReconstructionReport> reports);

/// Fixed-width absolute-error table: one column per method (first-seen
/// order), one row per scenario.
std::string reports_to_table(std::span<const ReconstructionReport> reports);

}  // namespace tomoqubo
