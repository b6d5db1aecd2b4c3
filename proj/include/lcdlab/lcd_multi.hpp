#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcdlab/lcd.hpp"

namespace lcdlab {

struct ColumnsLcd {
  LcdResult result;
  std::size_t argmin = 0;
};

// min over columns of the randomized logarithmic LCD of v, column i supplying the laws.
ColumnsLcd log_rlcd_columns(const std::vector<LawVector>& column_laws, const Eigen::Ref<const Eigen::VectorXd>& v,
                            double L, double u, const SolverOptions& opts = {});

struct DirectionalLcd {
  LcdResult result;
  Eigen::VectorXd direction;  // unit witness w; theta = value * w
  std::size_t directions_tried = 0;
};

// Upper estimate of inf{|theta| : E dist^2(V^T theta * Xbar, Z^N) < L^2 log+(u |V^T theta| / L)} for
// V of shape n x N. Directions come from seed.substream(k), k < direction_budget, so a larger budget
// searches a superset. Exact for n = 1.
DirectionalLcd log_rlcd_matrix(const Eigen::Ref<const Eigen::MatrixXd>& V, const LawVector& laws, double L, double u,
                               std::size_t direction_budget, const SeedSpec& seed, const SolverOptions& opts = {});

// Upper estimate of the infimum of the vector LCD over unit vectors of span(basis). The basis columns
// must be orthonormal. One-dimensional spans are exact; two-dimensional spans are swept on an angular
// grid of net_resolution points; higher dimensions use net_resolution random directions. The best
// direction is then refined locally.
DirectionalLcd log_rlcd_subspace(const Eigen::Ref<const Eigen::MatrixXd>& basis, const LawVector& laws, double L,
                                 double u, std::size_t net_resolution, const SeedSpec& seed,
                                 const SolverOptions& opts = {});

struct LGrid {
  double base = 1.0;
  std::vector<double> elements;
};

// {L, 2L} union {L + i/10 : 1 <= i <= floor(10 L)}, sorted and deduplicated.
LGrid lgrid(double L);

enum class Verdict { hold, violated, vacuous, hold_at_ceiling };
const char* to_string(Verdict v);

struct MonotoneCheck {
  Verdict verdict = Verdict::vacuous;
  double lcd_small_L = 0.0;  // at L2
  double lcd_large_L = 0.0;  // at L1
  double hypothesis_threshold = 0.0;
  double margin = 0.0;
};

// If the LCD at L2 is at least max(L1/u, u^-1 L1^{L1^2/(L1^2-L2^2)} / L2^{L2^2/(L1^2-L2^2)}) / |x|,
// it must dominate the LCD at L1. Requires L1 > L2 > 0.
MonotoneCheck check_monotone_in_L(const Eigen::Ref<const Eigen::VectorXd>& x, const LawVector& laws, double L1,
                                  double L2, double u, const SolverOptions& opts = {});

struct ComparisonCheck {
  Verdict verdict = Verdict::hold;
  double log_rlcd = 0.0;
  double rlcd = 0.0;
  double ceiling = 0.0;  // (L / (u |v|)) exp(n (gamma / L)^2)
  double margin = 0.0;   // log_rlcd - min(rlcd, ceiling)
  std::string reading;
};

// logRLCD_{L,u}(v) >= min(RLCD_{gamma sqrt(n), t}(v), (L / (u |v|)) e^{n (gamma/L)^2}). Requires u^2 <= 2t.
ComparisonCheck check_comparison(const Eigen::Ref<const Eigen::VectorXd>& v, const LawVector& laws, double L,
                                 double u, double gamma, double t, const SolverOptions& opts = {});

struct StabilityCheck {
  Verdict verdict = Verdict::vacuous;
  double D = 0.0;
  double upper_side = 0.0;  // LCD of y at (2L, 2u r2/r1), must be <= D
  double lower_side = 0.0;  // LCD of y at (L/2, (u/2) r1/r2), must be >= D
  double eps_sq_var = 0.0;
  double eps_allowance = 0.0;  // (1/8)(L^2/D^2) log+(u |D x| / L)
};

// Perturbation sandwich for x, y in the open annulus r1 < |.| < r2 with |x - y|_inf < eps. Reports
// vacuous unless eps^2 Var(X) <= (1/8)(L^2/D^2) log+(u |D x| / L) for D the LCD of x.
StabilityCheck check_stability(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                               const LawVector& laws, double L, double u, double r1, double r2, double eps,
                               const SolverOptions& opts = {});

// Var(X) recovered from the symmetrized laws: sum_i Var(Xbar_i) / 2.
double total_variance(const LawVector& laws);

}  // namespace lcdlab
