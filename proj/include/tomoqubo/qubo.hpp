#pragma once

#include "tomoqubo/encoding.hpp"
#include "tomoqubo/geometry.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tomoqubo {

struct LinearTerm {
  Eigen::Index var;
  double coeff;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

struct QuadraticTerm {
  Eigen::Index i;
  Eigen::Index j;
  double coeff;
  friend bool operator==(const QuadraticTerm&, const QuadraticTerm&) = default;
};

/// energy(q) = offset + sum_v linear[v] q_v + sum_{i<j} quadratic(i, j) q_i q_j.
///
/// Linear coefficients are held densely (an exact zero means "no term");
/// quadratic coefficients are a strictly upper triangular sparse matrix with
/// no explicit zeros. Instances are immutable once built.
class QuboModel {
 public:
  using Upper = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

  QuboModel() = default;
  explicit QuboModel(Eigen::Index num_vars);

  /// Validates finiteness and strict upper triangularity; prunes zeros.
  QuboModel(Eigen::VectorXd linear, Upper quadratic, double offset);

  /// Builds from term lists. Throws ValidationError on out-of-range or
  /// non-upper keys, duplicate keys, zero or non-finite coefficients.
  static QuboModel from_terms(Eigen::Index num_vars, double offset,
                              const std::vector<LinearTerm>& linear,
                              const std::vector<QuadraticTerm>& quadratic);

  Eigen::Index num_vars() const noexcept { return linear_.size(); }
  const Eigen::VectorXd& linear() const noexcept { return linear_; }
  const Upper& quadratic() const noexcept { return quadratic_; }
  double offset() const noexcept { return offset_; }
  bool empty() const noexcept { return num_vars() == 0; }

  double quadratic_at(Eigen::Index i, Eigen::Index j) const;

  /// Nonzero terms in ascending index order.
  std::vector<LinearTerm> linear_terms() const;
  std::vector<QuadraticTerm> quadratic_terms() const;

  friend bool operator==(const QuboModel& a, const QuboModel& b);

 private:
  Eigen::VectorXd linear_;
  Upper quadratic_;
  double offset_ = 0.0;
};

/// QUBO of ||W q - t||^2 - ||t||^2 over binary q. The +||t||^2 of the
/// expansion and the subtracted ||t||^2 cancel, so the offset is 0; q^2 = q
/// folds the diagonal of W^T W into the linear terms.
QuboModel least_squares_qubo(const Eigen::SparseMatrix<double, Eigen::RowMajor, int>& w,
                             const Eigen::VectorXd& target);

/// Data-fidelity model: sum over rays of (projected superposition - P)^2
/// minus sum P^2. Its value at the true image's bits is -sum P^2 when P is an
/// exact projection.
QuboModel build_q1(const Sinogram& sino, const SystemMatrix& sm,
                   const EncodingScheme& scheme, const VariableMap& map);

/// First differences over horizontally then vertically adjacent pixel pairs,
/// each in row-major order: a (pairs x pixels) matrix with +1/-1 per row.
Eigen::SparseMatrix<double, Eigen::RowMajor, int> neighbor_difference_operator(int width,
                                                                               int height);

/// Total variation model: sum over adjacent pairs of (I_p - I_p')^2.
QuboModel build_q2(const EncodingScheme& scheme, const VariableMap& map);

/// a * q1 + b * q2 coefficient-wise, zeros pruned. a, b must be finite and
/// non-negative.
QuboModel combine(const QuboModel& q1, const QuboModel& q2, double a, double b);

template <typename Derived>
double energy(const QuboModel& model, const Eigen::MatrixBase<Derived>& bits) {
  if (bits.size() != model.num_vars())
    throw std::invalid_argument("bitstring length does not match the model");
  const Eigen::VectorXd x = bits.template cast<double>();
  return model.offset() + model.linear().dot(x) + x.dot(model.quadratic() * x);
}

/// {"num_vars", "offset", "linear": [[v, c], ...], "quadratic": [[i, j, c],
/// ...]}, entries sorted by index, shortest round-trip numbers.
std::string qubo_to_json(const QuboModel& model);
QuboModel qubo_from_json(std::string_view text);
void export_qubo(const QuboModel& model, const std::filesystem::path& path);
QuboModel import_qubo(const std::filesystem::path& path);

}  // namespace tomoqubo
