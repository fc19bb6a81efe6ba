#include "tomoqubo/qubo.hpp"

#include "tomoqubo/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

namespace tomoqubo {

namespace {

using SparseRow = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using SparseCol = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

void check_upper(const QuboModel::Upper& q, Eigen::Index n) {
  if (q.rows() != n || q.cols() != n)
    throw ValidationError("quadratic matrix must be num_vars x num_vars");
  for (int r = 0; r < q.outerSize(); ++r) {
    for (QuboModel::Upper::InnerIterator it(q, r); it; ++it) {
      if (it.col() <= it.row())
        throw ValidationError("quadratic keys must satisfy i < j");
      if (!std::isfinite(it.value())) throw ValidationError("quadratic coefficient not finite");
    }
  }
}

}  // namespace

QuboModel::QuboModel(Eigen::Index num_vars)
    : linear_(Eigen::VectorXd::Zero(num_vars)), quadratic_(num_vars, num_vars) {
  if (num_vars < 0) throw std::invalid_argument("num_vars must be >= 0");
}

QuboModel::QuboModel(Eigen::VectorXd linear, Upper quadratic, double offset)
    : linear_(std::move(linear)), quadratic_(std::move(quadratic)), offset_(offset) {
  if (!linear_.allFinite()) throw ValidationError("linear coefficient not finite");
  if (!std::isfinite(offset_)) throw ValidationError("offset not finite");
  check_upper(quadratic_, linear_.size());
  quadratic_.prune([](Eigen::Index, Eigen::Index, double v) { return v != 0.0; });
  quadratic_.makeCompressed();
}

QuboModel QuboModel::from_terms(Eigen::Index num_vars, double offset,
                                const std::vector<LinearTerm>& linear,
                                const std::vector<QuadraticTerm>& quadratic) {
  if (num_vars < 0) throw ValidationError("num_vars must be >= 0");
  Eigen::VectorXd lin = Eigen::VectorXd::Zero(num_vars);
  std::vector<bool> seen(static_cast<std::size_t>(num_vars), false);
  for (const auto& t : linear) {
    if (t.var < 0 || t.var >= num_vars) throw ValidationError("linear index out of range");
    if (seen[static_cast<std::size_t>(t.var)]) throw ValidationError("duplicate linear index");
    if (t.coeff == 0.0 || !std::isfinite(t.coeff))
      throw ValidationError("linear coefficient must be finite and nonzero");
    seen[static_cast<std::size_t>(t.var)] = true;
    lin(t.var) = t.coeff;
  }

  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(quadratic.size());
  std::set<std::pair<Eigen::Index, Eigen::Index>> keys;
  for (const auto& t : quadratic) {
    if (t.i < 0 || t.j >= num_vars || t.i >= t.j)
      throw ValidationError("quadratic key (" + std::to_string(t.i) + ", " +
                            std::to_string(t.j) + ") violates i < j < num_vars");
    if (!keys.emplace(t.i, t.j).second) throw ValidationError("duplicate quadratic key");
    if (t.coeff == 0.0 || !std::isfinite(t.coeff))
      throw ValidationError("quadratic coefficient must be finite and nonzero");
    triplets.emplace_back(static_cast<int>(t.i), static_cast<int>(t.j), t.coeff);
  }
  Upper q(num_vars, num_vars);
  q.setFromTriplets(triplets.begin(), triplets.end());
  return QuboModel(std::move(lin), std::move(q), offset);
}

double QuboModel::quadratic_at(Eigen::Index i, Eigen::Index j) const {
  if (i > j) std::swap(i, j);
  if (i == j || j >= num_vars()) return 0.0;
  return quadratic_.coeff(i, j);
}

std::vector<LinearTerm> QuboModel::linear_terms() const {
  std::vector<LinearTerm> out;
  for (Eigen::Index v = 0; v < linear_.size(); ++v)
    if (linear_(v) != 0.0) out.push_back({v, linear_(v)});
  return out;
}

std::vector<QuadraticTerm> QuboModel::quadratic_terms() const {
  std::vector<QuadraticTerm> out;
  out.reserve(static_cast<std::size_t>(quadratic_.nonZeros()));
  for (int r = 0; r < quadratic_.outerSize(); ++r)
    for (Upper::InnerIterator it(quadratic_, r); it; ++it)
      out.push_back({it.row(), it.col(), it.value()});
  return out;
}

bool operator==(const QuboModel& a, const QuboModel& b) {
  return a.offset_ == b.offset_ && a.linear_ == b.linear_ &&
         a.quadratic_terms() == b.quadratic_terms();
}

QuboModel least_squares_qubo(const SparseRow& w, const Eigen::VectorXd& target) {
  if (w.rows() != target.size())
    throw std::invalid_argument("least-squares target length does not match the operator");
  const SparseCol wc = w;
  const SparseCol gram = wc.transpose() * wc;

  Eigen::VectorXd linear = gram.diagonal() - 2.0 * (wc.transpose() * target);
  QuboModel::Upper upper = 2.0 * gram;
  upper.prune([](Eigen::Index r, Eigen::Index c, double v) { return c > r && v != 0.0; });
  return QuboModel(std::move(linear), std::move(upper), 0.0);
}

QuboModel build_q1(const Sinogram& sino, const SystemMatrix& sm,
                   const EncodingScheme& scheme, const VariableMap& map) {
  const ProjectionGeometry& g = sm.geometry;
  if (sino.rows() != g.num_angles() || sino.cols() != g.detector_bins)
    throw std::invalid_argument("sinogram shape does not match the projection geometry");
  if (map.width() != g.image_width || map.height() != g.image_height)
    throw std::invalid_argument("variable map does not match the projection geometry");
  const SparseRow w = sm.weights * expansion_matrix(scheme, map);
  const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(sino.data(), sino.size());
  return least_squares_qubo(w, target);
}

SparseRow neighbor_difference_operator(int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be positive");
  std::vector<Eigen::Triplet<double, int>> triplets;
  int row = 0;
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j + 1 < width; ++j, ++row) {
      triplets.emplace_back(row, i * width + j, 1.0);
      triplets.emplace_back(row, i * width + j + 1, -1.0);
    }
  }
  for (int i = 0; i + 1 < height; ++i) {
    for (int j = 0; j < width; ++j, ++row) {
      triplets.emplace_back(row, i * width + j, 1.0);
      triplets.emplace_back(row, (i + 1) * width + j, -1.0);
    }
  }
  SparseRow d(row, width * height);
  d.setFromTriplets(triplets.begin(), triplets.end());
  return d;
}

QuboModel build_q2(const EncodingScheme& scheme, const VariableMap& map) {
  const SparseRow d = neighbor_difference_operator(map.width(), map.height());
  if (d.rows() == 0) return QuboModel(map.total_vars());
  const SparseRow w = d * expansion_matrix(scheme, map);
  return least_squares_qubo(w, Eigen::VectorXd::Zero(w.rows()));
}

QuboModel combine(const QuboModel& q1, const QuboModel& q2, double a, double b) {
  if (q1.num_vars() != q2.num_vars())
    throw std::invalid_argument("cannot combine models with different variable counts");
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("combination weights must be finite and >= 0");
  QuboModel::Upper upper = a * q1.quadratic() + b * q2.quadratic();
  return QuboModel(a * q1.linear() + b * q2.linear(), std::move(upper),
                   a * q1.offset() + b * q2.offset());
}

std::string qubo_to_json(const QuboModel& model) {
  nlohmann::ordered_json doc;
  doc["num_vars"] = model.num_vars();
  doc["offset"] = model.offset();
  auto linear = nlohmann::ordered_json::array();
  for (const auto& t : model.linear_terms()) linear.push_back({t.var, t.coeff});
  auto quadratic = nlohmann::ordered_json::array();
  for (const auto& t : model.quadratic_terms()) quadratic.push_back({t.i, t.j, t.coeff});
  doc["linear"] = std::move(linear);
  doc["quadratic"] = std::move(quadratic);
  return doc.dump();
}

QuboModel qubo_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("QUBO JSON: ") + e.what(), e.byte, false);
  }
  try {
    if (!doc.is_object()) throw ValidationError("QUBO JSON must be an object");
    const auto n = doc.at("num_vars").get<Eigen::Index>();
    const double offset = doc.at("offset").get<double>();
    std::vector<LinearTerm> linear;
    for (const auto& e : doc.at("linear")) {
      if (!e.is_array() || e.size() != 2) throw ValidationError("linear entries are [v, c]");
      linear.push_back({e[0].get<Eigen::Index>(), e[1].get<double>()});
    }
    std::vector<QuadraticTerm> quadratic;
    for (const auto& e : doc.at("quadratic")) {
      if (!e.is_array() || e.size() != 3) throw ValidationError("quadratic entries are [i, j, c]");
      quadratic.push_back({e[0].get<Eigen::Index>(), e[1].get<Eigen::Index>(), e[2].get<double>()});
    }
    return QuboModel::from_terms(n, offset, linear, quadratic);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("QUBO JSON: ") + e.what());
  }
}

void export_qubo(const QuboModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << qubo_to_json(model) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

QuboModel import_qubo(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return qubo_from_json(text);
}

}  // namespace tomoqubo
