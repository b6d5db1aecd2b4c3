#include "lcdlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lcdlab {

double dist_to_integer_lattice(const Eigen::Ref<const Eigen::VectorXd>& w) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) acc += dist_sq_to_integer(w[i]);
  return std::sqrt(acc);
}

void SphereParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
}

std::size_t SphereParams::sparsity(std::size_t n) const {
  return static_cast<std::size_t>(std::floor(delta * static_cast<double>(n) + 1e-9));
}

namespace {

void require_unit(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() == 0) throw NormalizationError("empty vector");
  const double norm = x.norm();
  if (std::abs(norm - 1.0) > 1e-9) throw NormalizationError("expected a unit vector, got norm " + std::to_string(norm));
}

}  // namespace

CompressibilityReport compressibility(const Eigen::Ref<const Eigen::VectorXd>& x, const SphereParams& params) {
  params.validate();
  require_unit(x);
  const auto n = static_cast<std::size_t>(x.size());
  const std::size_t k = params.sparsity(n);
  if (k < 1) throw std::invalid_argument("floor(delta n) must be at least 1");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(x[a]) > std::abs(x[b]); });

  double head_sq = 0.0;
  for (std::size_t r = 0; r < k; ++r) head_sq += x[order[r]] * x[order[r]];

  CompressibilityReport rep;
  rep.sparse_distance = std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(head_sq)));
  rep.is_compressible = rep.sparse_distance <= params.rho;
  rep.best_support.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(rep.best_support.begin(), rep.best_support.end());
  return rep;
}

std::optional<SpreadSet> spread_set(const Eigen::Ref<const Eigen::VectorXd>& x, const SphereParams& params) {
  params.validate();
  require_unit(x);
  const double n = static_cast<double>(x.size());
  SpreadSet s;
  s.lower = params.rho / std::sqrt(2.0 * n);
  s.upper = 1.0 / std::sqrt(params.delta * n);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double a = std::abs(x[j]);
    if (a >= s.lower && a <= s.upper) s.indices.push_back(static_cast<std::size_t>(j));
  }
  const double needed = 0.5 * params.rho * params.rho * params.delta * n;
  if (static_cast<double>(s.indices.size()) < needed) return std::nullopt;
  return s;
}

ColumnSpan::ColumnSpan(const Eigen::Ref<const Eigen::MatrixXd>& A, double rel_tol)
    : reflectors_(A), tau_(std::min(A.rows(), A.cols())) {
  const Eigen::Index n = A.rows();
  Eigen::VectorXd scratch(std::max<Eigen::Index>(A.cols(), 1));
  for (Eigen::Index j = 0; j < A.cols() && static_cast<Eigen::Index>(rank_) < n; ++j) {
    const double original = A.col(j).norm();
    const auto r = static_cast<Eigen::Index>(rank_);
    if (original == 0.0) continue;
    auto tail = reflectors_.col(j).tail(n - r);
    if (tail.norm() <= rel_tol * original) continue;
    if (j != r) reflectors_.col(r).tail(n - r) = tail;
    double beta = 0.0;
    auto target = reflectors_.col(r).tail(n - r);
    target.makeHouseholderInPlace(tau_[r], beta);
    target[0] = beta;
    const Eigen::Index rest = A.cols() - j - 1;
    if (rest > 0) {
      reflectors_.block(r, j + 1, n - r, rest)
          .applyHouseholderOnTheLeft(target.tail(n - r - 1), tau_[r], scratch.data());
    }
    ++rank_;
  }
  reflectors_.conservativeResize(n, static_cast<Eigen::Index>(rank_));
  tau_.conservativeResize(static_cast<Eigen::Index>(rank_));
}

void ColumnSpan::to_reflected(Eigen::VectorXd& x) const {
  const Eigen::Index n = reflectors_.rows();
  double scratch = 0.0;
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(rank_); ++r) {
    x.tail(n - r).applyHouseholderOnTheLeft(reflectors_.col(r).tail(n - r - 1), tau_[r], &scratch);
  }
}

void ColumnSpan::from_reflected(Eigen::VectorXd& x) const {
  const Eigen::Index n = reflectors_.rows();
  double scratch = 0.0;
  for (Eigen::Index r = static_cast<Eigen::Index>(rank_) - 1; r >= 0; --r) {
    x.tail(n - r).applyHouseholderOnTheLeft(reflectors_.col(r).tail(n - r - 1), tau_[r], &scratch);
  }
}

double ColumnSpan::distance(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd y = x;
  to_reflected(y);
  return y.tail(y.size() - static_cast<Eigen::Index>(rank_)).norm();
}

Eigen::VectorXd ColumnSpan::residual(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd y = x;
  to_reflected(y);
  y.head(static_cast<Eigen::Index>(rank_)).setZero();
  from_reflected(y);
  return y;
}

Eigen::MatrixXd ColumnSpan::basis() const {
  const Eigen::Index n = reflectors_.rows();
  Eigen::MatrixXd Q(n, static_cast<Eigen::Index>(rank_));
  for (Eigen::Index c = 0; c < Q.cols(); ++c) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, c);
    from_reflected(e);
    Q.col(c) = e;
  }
  return Q;
}

Eigen::MatrixXd ColumnSpan::complement_basis() const {
  const Eigen::Index n = reflectors_.rows();
  const auto r = static_cast<Eigen::Index>(rank_);
  Eigen::MatrixXd Q(n, n - r);
  for (Eigen::Index c = 0; c < n - r; ++c) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, r + c);
    from_reflected(e);
    Q.col(c) = e;
  }
  return Q;
}

double distance_to_colspan(const Eigen::Ref<const Eigen::MatrixXd>& A, const Eigen::Ref<const Eigen::VectorXd>& X) {
  if (A.rows() != X.size()) throw std::invalid_argument("distance_to_colspan: dimension mismatch");
  return ColumnSpan(A).distance(X);
}

Eigen::VectorXd project_orthocomplement(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                        const Eigen::Ref<const Eigen::VectorXd>& X) {
  if (A.rows() != X.size()) throw std::invalid_argument("project_orthocomplement: dimension mismatch");
  return ColumnSpan(A).residual(X);
}

}  // namespace lcdlab
