#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lcdlab/models.hpp"
#include "lcdlab/rng.hpp"

namespace lcdlab {

enum class ConcentrationMode { exact_discrete, monte_carlo };

struct ConcentrationEstimate {
  double value = 0.0;
  double stderr = 0.0;
  ConcentrationMode mode = ConcentrationMode::exact_discrete;
  Eigen::VectorXd center;
};

// Finite law on R^d.
struct PointLaw {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> probs;

  std::size_t dim() const { return points.empty() ? 0 : static_cast<std::size_t>(points.front().size()); }
  static PointLaw from(const EntryDistribution& law);
  // Law of (xi_1, ..., xi_d) for independent finite coordinates.
  static PointLaw product(const std::vector<EntryDistribution>& coords);
  PointLaw transformed(const Eigen::MatrixXd& Q) const;
};

// sup_v P(|Z - v| <= t), exact for dimension <= 3.
ConcentrationEstimate levy_concentration(const PointLaw& law, double t);
ConcentrationEstimate levy_concentration(const EntryDistribution& law, double t);

using VectorSampler = std::function<Eigen::VectorXd(Stream&)>;

// Held-out estimate: the best center among sample points of the first half is chosen on the first
// half and scored on the second half, so the reported value estimates P(|Z - c| <= t) <= L(Z, t).
ConcentrationEstimate levy_concentration_mc(const VectorSampler& sampler, double t, std::size_t trials,
                                            const SeedSpec& seed);

// theta -> |E exp(2 pi i <theta, Y>)|
using CharFnModulus = std::function<double(const Eigen::VectorXd&)>;

CharFnModulus charfn_modulus_of(const PointLaw& law);
CharFnModulus product_charfn_modulus(const std::vector<EntryDistribution>& coords);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integral of |phi| over the ball of radius sqrt(d), d in {1, 2, 3}. Absolute tolerance is 1e-6 on the line
// and 1e-4 in two and three dimensions.
double esseen_integral(const CharFnModulus& phi, int d);
double esseen_bound(const CharFnModulus& phi, int d, double C1);

class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SbpBoundInputs {
  double D = 1.0;
  double L = 1.0;
  double u = 0.25;
  int d = 1;
  double t = 0.1;
  double det_root = 1.0;
  double C = 1.0;
};

// (C L / (sqrt(d) u))^d max(t, t0)^d / det_root with t0 = sqrt(d) / D. Needs 2 L^2 >= d + 2.
double sbp_formula_bound(const SbpBoundInputs& in);

// (C L / u)^d (max(t, t0) / sqrt(d))^d with t0 = sqrt(d) / D. Needs 2 L^2 >= d + 2 and L >= 1.
double projection_sbp_bound(double D, double L, double u, int d, double t, double C);

}  // namespace lcdlab
