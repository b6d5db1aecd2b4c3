#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace lcdlab {

class NormalizationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// sqrt(sum_i min_k (w_i - k)^2)
double dist_to_integer_lattice(const Eigen::Ref<const Eigen::VectorXd>& w);
// Scalar helper: squared distance from x to the nearest integer.
inline double dist_sq_to_integer(double x) {
  const double r = x - std::nearbyint(x);
  return r * r;
}

struct SphereParams {
  double delta = 0.1;
  double rho = 0.3;

  void validate() const;
  // k = floor(delta * n), with a small nudge so delta * n landing a hair under an integer still counts.
  std::size_t sparsity(std::size_t n) const;
};

struct CompressibilityReport {
  bool is_compressible = false;
  double sparse_distance = 0.0;
  std::vector<std::size_t> best_support;
};

// Distance from a unit vector to the nearest floor(delta n)-sparse unit vector, in closed form.
CompressibilityReport compressibility(const Eigen::Ref<const Eigen::VectorXd>& x, const SphereParams& params);

struct SpreadSet {
  std::vector<std::size_t> indices;
  double lower = 0.0;
  double upper = 0.0;
};

// Indices whose magnitudes lie in [rho/sqrt(2n), 1/sqrt(delta n)]. Empty optional when the set
// is smaller than rho^2 delta n / 2.
std::optional<SpreadSet> spread_set(const Eigen::Ref<const Eigen::VectorXd>& x, const SphereParams& params);

// Orthonormal description of a column span built with Householder reflections. A column whose
// residual (after removing the span of the earlier columns) is below rel_tol times its original
// norm is treated as dependent and skipped, so rank() reports the true dimension of the span.
class ColumnSpan {
 public:
  explicit ColumnSpan(const Eigen::Ref<const Eigen::MatrixXd>& A, double rel_tol = 1e-10);

  std::size_t ambient_dim() const { return static_cast<std::size_t>(reflectors_.rows()); }
  std::size_t rank() const { return rank_; }

  double distance(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd residual(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // Orthonormal basis of the span, ambient_dim x rank.
  Eigen::MatrixXd basis() const;
  // Orthonormal basis of the orthogonal complement, ambient_dim x (ambient_dim - rank).
  Eigen::MatrixXd complement_basis() const;

 private:
  void to_reflected(Eigen::VectorXd& x) const;
  void from_reflected(Eigen::VectorXd& x) const;

  Eigen::MatrixXd reflectors_;  // essential parts below the diagonal, column r holds reflector r
  Eigen::VectorXd tau_;
  std::size_t rank_ = 0;
};

double distance_to_colspan(const Eigen::Ref<const Eigen::MatrixXd>& A, const Eigen::Ref<const Eigen::VectorXd>& X);
Eigen::VectorXd project_orthocomplement(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                        const Eigen::Ref<const Eigen::VectorXd>& X);

}  // namespace lcdlab
