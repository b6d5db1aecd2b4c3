#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lcdlab/geometry.hpp"
#include "lcdlab/lcd.hpp"
#include "lcdlab/models.hpp"
#include "lcdlab/rng.hpp"

namespace lcdlab {

struct WeightVector {
  Eigen::VectorXd alpha;
  double log_product = 0.0;

  static WeightVector from(Eigen::VectorXd alpha);
  static WeightVector ones(std::size_t n);
  std::size_t size() const { return static_cast<std::size_t>(alpha.size()); }
  // log prod alpha_i >= -n log kappa
  bool in_omega(double kappa) const;
};

// Net of weight vectors built from the geometric grid e^{-j}: every element has exponents j_i >= 0
// with sum_i j_i = J, J = floor(n (1 + log kappa)). Each beta in Omega_kappa dominates one of them.
struct WeightNet {
  double kappa = 0.0;
  std::size_t n = 0;
  int total_exponent = 0;
  std::vector<std::vector<int>> exponents;  // sorted lexicographically
  double size_constant = 0.0;               // C with |F| = (C log kappa)^n

  std::size_t size() const { return exponents.size(); }
  WeightVector element(std::size_t k) const;
  // Index of an element alpha with alpha <= beta coordinatewise, if one exists.
  std::optional<std::size_t> dominated_by(const Eigen::Ref<const Eigen::VectorXd>& beta) const;
};

WeightNet weight_net(double kappa, std::size_t n);

enum class LatticeMode { exact, sampled };

struct AnnulusLattice {
  WeightVector alpha;
  double epsilon = 0.0;
  std::size_t n = 0;
  LatticeMode mode = LatticeMode::exact;
  std::vector<Eigen::VectorXd> points;
  double census_estimate = 0.0;  // annulus volume over cell volume
  double acceptance_rate = 1.0;  // sampled mode only
};

class EnumerationBudgetError : public BudgetError {
 public:
  EnumerationBudgetError(const std::string& what, double estimate) : BudgetError(what), census_estimate(estimate) {}
  double census_estimate;
};

// Step alpha_i epsilon / sqrt(n) on coordinate i.
Eigen::VectorXd lattice_steps(const WeightVector& alpha, double epsilon);
double annulus_census_estimate(const WeightVector& alpha, double epsilon);

// All lattice points with 1/2 <= |p| <= 3/2. Throws EnumerationBudgetError past `budget` points and
// std::invalid_argument above exact_limit coordinates.
AnnulusLattice enumerate_annulus_lattice(const WeightVector& alpha, double epsilon, std::size_t budget,
                                         std::size_t exact_limit = 10);

// `count` lattice points obtained by rounding uniform annulus vectors to the grid.
AnnulusLattice sample_annulus_lattice(const WeightVector& alpha, double epsilon, std::size_t count,
                                      const SeedSpec& seed);

struct RegularizedHsResult {
  double value = 0.0;
  WeightVector alpha_star;
  std::vector<std::size_t> active_set;
  double lambda = 0.0;
  double kkt_residual = 0.0;
};

// min sum alpha_i^2 |A_i|^2 over alpha in (0,1]^n with prod alpha_i >= kappa^{-n}.
RegularizedHsResult regularized_hs(const Eigen::VectorXd& column_norms_sq, double kappa);
RegularizedHsResult regularized_hs_matrix(const Eigen::MatrixXd& A, double kappa);

struct NetApproximation {
  Eigen::VectorXd y;
  WeightVector alpha;
  double B = 0.0;
  double linf = 0.0;
  double linf_bound = 0.0;  // epsilon / sqrt(n)
  double matrix_cert = 0.0;
  double matrix_bound = 0.0;  // epsilon sqrt(B) / sqrt(n)
  bool annulus_miss = false;
  bool derandomized = false;
};

// Rounds x to the grid of the optimal regularized weights: nearest multiple first (ties toward zero),
// falling back to rounding by conditional expectations when the matrix certificate fails.
NetApproximation approximate_on_net(const Eigen::MatrixXd& A, const Eigen::Ref<const Eigen::VectorXd>& x, double kappa,
                                    double epsilon);

struct LevelSetQuery {
  double L = 1.0;
  double u = 0.1;
  double D = 1.0;
  double r_low = 0.5;
  double r_high = 1.5;
};

enum class LevelSetClass { in_S, in_S_tilde, neither, annulus_miss };
const char* to_string(LevelSetClass c);

struct LevelSetReport {
  LevelSetClass cls = LevelSetClass::neither;
  double m = 0.0;
  bool m_censored = false;
  double wide = 0.0;    // columns LCD at (2L, 6u)
  double narrow = 0.0;  // columns LCD at (L/2, u/6)
  bool in_S = false;
  bool in_S_tilde = false;
};

LevelSetReport level_set_classify(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<LawVector>& column_laws,
                                  const LevelSetQuery& query, double theta_max);

struct StructuredSample {
  std::vector<Eigen::VectorXd> points;
  Eigen::VectorXd steps;  // lambda_i / sqrt(n)
  std::size_t attempts = 0;
  double acceptance_rate = 0.0;
};

// Uniform draws from {p in (3/2) B : #{i : |p_i| >= rho / (2 sqrt n)} >= delta n} on the grid
// prod (lambda_i / sqrt n) Z, by rejection from the bounding box.
StructuredSample sample_structured_lattice(const Eigen::Ref<const Eigen::VectorXd>& lambdas, const SphereParams& params,
                                           const SeedSpec& seed, std::size_t count);
bool in_structured_lattice(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::VectorXd>& steps,
                           const SphereParams& params);

}  // namespace lcdlab
