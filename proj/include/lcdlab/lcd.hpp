#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lcdlab/models.hpp"
#include "lcdlab/rng.hpp"

namespace lcdlab {

enum class LcdKind { essential, logarithmic, randomized, randomized_log };

const char* to_string(LcdKind kind);
std::optional<LcdKind> parse_lcd_kind(std::string_view name);

struct LcdVariant {
  LcdKind kind = LcdKind::randomized_log;
  double L = 1.0;
  double u = 0.25;

  bool randomized() const { return kind == LcdKind::randomized || kind == LcdKind::randomized_log; }
  // Requires L > 0 and 0 < u < 1.
  void validate() const;
};

using LawVector = std::vector<SymmetrizedDistribution>;

LawVector symmetrized_laws(const RandomVectorModel& model);

// E dist^2(theta * (v * Xbar), Z^n), exact for finite laws; gaussian coordinates use
// gaussian_sq_dist_mean.
double expected_sq_dist(double theta, const Eigen::Ref<const Eigen::VectorXd>& v, std::span<const SymmetrizedDistribution> laws);

struct MonteCarloValue {
  double mean = 0.0;
  double stderr = 0.0;
  std::size_t samples = 0;
};

MonteCarloValue expected_sq_dist_mc(double theta, const Eigen::Ref<const Eigen::VectorXd>& v,
                                    std::span<const SymmetrizedDistribution> laws, std::size_t samples,
                                    const SeedSpec& seed);

// E dist^2(Y, Z) for Y ~ N(0, tau^2).
double gaussian_sq_dist_mean(double tau);

// Right-hand side of the variant's defining inequality, on its natural scale:
//   essential       min(u |theta v|, L)
//   logarithmic     L sqrt(log+(u |theta v| / L))
//   randomized      min(u |theta v|^2, L^2)
//   randomized-log  L^2 log+(u |theta v| / L)
double threshold(const LcdVariant& variant, double theta, double norm_v);

class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolverOptions {
  double theta_max = 1e4;
  double grid_step = 0.0;  // 0 selects the period bound
  double bisect_tol = 1e-10;
};

struct LcdQuery {
  LcdVariant variant;
  Eigen::VectorXd v;
  LawVector laws;  // one per coordinate; ignored by the deterministic variants
  double theta_max = 1e4;
  double grid_step = 0.0;
  double bisect_tol = 1e-10;
  // Property checks may evaluate rescaled parameters with u >= 1.
  bool allow_large_u = false;

  static LcdQuery make(const LcdVariant& variant, Eigen::VectorXd v, LawVector laws, const SolverOptions& opts = {});
};

struct LcdResult {
  double value = 0.0;
  bool censored = false;
  // |lhs - rhs| at value, on the squared scale on which the solver compares.
  double crossing_residual = 0.0;
};

// Largest admissible scan step: min_i 1 / (4 |v_i| max|Xbar_i|).
double resolution_bound(const LcdQuery& query);

// Smallest theta in (0, theta_max] with lhs(theta) <= rhs(theta) - 1e-12 (squared scale), up to bisect_tol.
// The returned value itself satisfies the inequality; the infimum lies within bisect_tol below it.
LcdResult lcd_infimum(const LcdQuery& query);

// Shorthand for the randomized logarithmic LCD of v.
LcdResult log_rlcd(const Eigen::Ref<const Eigen::VectorXd>& v, const LawVector& laws, double L, double u,
                   const SolverOptions& opts = {});

// Value at which the defining inequality is tested: lhs - rhs on the squared scale.
double lcd_gap(const LcdQuery& query, double theta);

}  // namespace lcdlab
