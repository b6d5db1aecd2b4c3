#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcdlab/model_config.hpp"
#include "lcdlab/rng.hpp"

namespace lcdlab {

struct ExperimentConstants {
  double b = 0.9;       // anti-concentration level
  double K = 2.0;       // Hilbert-Schmidt budget factor
  double delta = 0.1;   // sparsity fraction
  double rho = 0.3;     // compressibility radius
  double u = 0.25;      // LCD parameter
  double lambda = 0.1;  // co-dimension guard d <= lambda n / log n
  double c1 = 1.0;      // second-moment factor E|X|^2 <= c1 n^2

  static ExperimentConstants from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct DistanceExperimentConfig {
  std::size_t n = 64;
  std::vector<std::size_t> d_list{1, 2, 4};
  std::vector<double> t_grid{0.05, 0.1, 0.2, 0.3, 0.5};
  std::size_t trials = 10000;
  VectorModelSpec x_model = VectorModelSpec::iid(EntryDistribution::gaussian(0.0, 1.0));
  MatrixModelSpec a_model = MatrixModelSpec::iid(EntryDistribution::gaussian(0.0, 1.0));
  SeedSpec seed{1};
  ExperimentConstants constants;
  unsigned threads = 0;

  // Throws ConfigError on malformed or out-of-range fields.
  static DistanceExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct ExperimentRecord {
  std::size_t n = 0;
  std::size_t d = 0;
  double t = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double phat = 0.0;
  double stderr = 0.0;
  std::uint64_t seed = 0;
  std::string flags = "ok";

  bool operator==(const ExperimentRecord&) const = default;
};

// Hypothesis flags for one co-dimension, joined with '|' ("ok" when none apply):
//   anticoncentration>b, second-moment>c1*n^2, hs-budget>K*N*n (N = n - d), out-of-theorem-range.
std::string hypothesis_flags(const DistanceExperimentConfig& cfg, std::size_t d);

// One row per (d, t). Every trial draws a fresh (A, X) pair on its own substream and the same
// distance is scored against every t.
std::vector<ExperimentRecord> run_distance_experiment(const DistanceExperimentConfig& cfg);

// The raw distances dist(X, span A) for one co-dimension, indexed by trial.
std::vector<double> sample_distances(const DistanceExperimentConfig& cfg, std::size_t d);

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double C_fit = 0.0;
  double r2 = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t rows_used = 0;
};

// Least squares of log phat on log t over rows with phat > 10 / trials. All rows must share (n, d).
FitResult fit_power_law(const std::vector<ExperimentRecord>& records);

}  // namespace lcdlab
