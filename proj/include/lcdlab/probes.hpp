#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lcdlab/experiments.hpp"
#include "lcdlab/geometry.hpp"
#include "lcdlab/model_config.hpp"
#include "lcdlab/rng.hpp"

namespace lcdlab {

// Does a random matrix keep compressible vectors away from zero?
struct CompressibleProbeConfig {
  std::size_t n = 32;  // length of x
  std::size_t N = 32;  // rows of A
  MatrixModelSpec a_model = MatrixModelSpec::iid(EntryDistribution::rademacher());
  SphereParams params;
  std::size_t trials = 200;
  std::size_t samples_per_trial = 200;
  double c = 0.1;
  SeedSpec seed{1};
};

struct CompressibleProbeReport {
  std::vector<double> trial_minima;  // min |Ax| / sqrt(N) per trial
  double envelope = 0.0;             // min over trials
  double median = 0.0;
  double fraction_below_c = 0.0;
  double max_sparse_distance = 0.0;  // largest distance of a sampled x to the sparse unit vectors
  bool all_compressible = true;

  nlohmann::json to_json() const;
};

// x = cos(phi) y + sin(phi) z with y a random floor(delta n)-sparse unit vector, z a unit vector
// orthogonal to y and 2 sin(phi / 2) <= 0.99 rho, so |x - y| < rho.
Eigen::VectorXd sample_compressible(std::size_t n, const SphereParams& params, Stream& rng);

CompressibleProbeReport run_compressible_probe(const CompressibleProbeConfig& cfg);

class HypothesisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TensorizationProbeConfig {
  EntryDistribution xi_law = EntryDistribution::gaussian(0.0, 1.0);
  std::size_t d = 2;
  std::vector<double> t_grid{0.05, 0.1, 0.2, 0.3, 0.5};
  std::size_t trials = 100000;
  double eps0 = 0.01;  // the per-coordinate bound is checked on [eps0, 1]
  double K_max = 10.0;
  SeedSpec seed{1};
};

struct TensorizationProbeReport {
  double K_hat = 0.0;  // max over the eps grid of P(|xi| <= eps) / eps
  std::vector<ExperimentRecord> rows;
  double C_fit = 0.0;       // least squares in log space with the slope held at d
  double C_envelope = 0.0;  // smallest C with phat <= (C K t)^d on every row with hits
  double worst_ratio = 0.0;  // max phat / (C_fit K t)^d
  std::size_t rows_used = 0;

  nlohmann::json to_json() const;
};

// P(|xi| <= eps), exact for finite and gaussian laws.
double small_ball_probability(const EntryDistribution& law, double eps);

// Throws HypothesisFailure when K_hat exceeds K_max.
TensorizationProbeReport run_tensorization_probe(const TensorizationProbeConfig& cfg);

struct UnstructuredProbeConfig {
  Eigen::VectorXd lambdas = Eigen::VectorXd::Constant(8, 0.01);
  VectorModelSpec x_model = VectorModelSpec::iid(EntryDistribution::rademacher());
  double L = 0.5;
  double u = 0.25;
  double gamma = 0.1;
  SphereParams params;
  std::size_t trials = 400;
  SeedSpec seed{1};
};

struct UnstructuredProbeReport {
  std::size_t n = 0;
  double threshold = 0.0;  // min((2L/u) e^{n (gamma/L)^2}, min_i 1/lambda_i)
  std::size_t samples = 0;
  std::size_t below = 0;
  double fraction = 0.0;
  double stderr = 0.0;
  double acceptance_rate = 0.0;
  bool all_members = true;

  nlohmann::json to_json() const;
};

double unstructured_threshold(std::size_t n, double L, double u, double gamma, const Eigen::Ref<const Eigen::VectorXd>& lambdas);

// Samples W uniformly from the structured lattice and counts how often the LCD of W / |W| falls
// below the threshold. Throws std::invalid_argument when the lattice cannot be sampled.
UnstructuredProbeReport run_unstructured_probe(const UnstructuredProbeConfig& cfg);

}  // namespace lcdlab
