#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcdlab/rng.hpp"

namespace lcdlab {

// Raised when a law would need more atoms than the exact-enumeration budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Atom {
  double value;
  double prob;
};

enum class LawKind { finite, gaussian };

inline constexpr std::size_t kMaxAtoms = 64;
inline constexpr std::size_t kMaxSymmetrizedAtoms = kMaxAtoms * kMaxAtoms;

// Law of a single real entry: a finite-support law or a gaussian.
// Immutable after construction. Finite atoms are stored sorted by value with
// duplicates merged and zero-probability atoms dropped.
class EntryDistribution {
 public:
  static EntryDistribution finite(std::vector<Atom> atoms);
  static EntryDistribution gaussian(double mean, double sigma);
  static EntryDistribution point_mass(double value);
  static EntryDistribution rademacher();
  // Bernoulli on {0, 1} with P(1) = p.
  static EntryDistribution bernoulli(double p);

  LawKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == LawKind::finite; }
  std::span<const Atom> atoms() const { return atoms_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double second_moment() const { return variance_ + mean_ * mean_; }
  // Gaussian only.
  double sigma() const { return sigma_; }

  // Law of c * xi.
  EntryDistribution scaled(double c) const;
  // Law of xi + shift.
  EntryDistribution shifted(double shift) const;

  double sample(Stream& rng) const;
  // |E exp(i s xi)|
  double charfn_modulus(double s) const;

 private:
  EntryDistribution() = default;

  LawKind kind_ = LawKind::finite;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double sigma_ = 0.0;
};

// Law of Xbar = X - X' for i.i.d. copies X, X'. Always symmetric about 0.
class SymmetrizedDistribution {
 public:
  explicit SymmetrizedDistribution(const EntryDistribution& base);

  const EntryDistribution& base() const { return base_; }
  LawKind kind() const { return base_.kind(); }
  bool is_finite() const { return base_.is_finite(); }
  std::span<const Atom> atoms() const { return atoms_; }
  double variance() const { return variance_; }
  // Standard deviation of Xbar (gaussian only).
  double sigma() const { return sigma_; }
  // max |s| over the support; gaussian laws report 4 sigma (heuristic extent).
  double max_abs() const { return max_abs_; }

  double sample(Stream& rng) const;

 private:
  EntryDistribution base_;
  std::vector<Atom> atoms_;
  double variance_ = 0.0;
  double sigma_ = 0.0;
  double max_abs_ = 0.0;
};

SymmetrizedDistribution symmetrize(const EntryDistribution& dist);

// sup_u P(|xi - u| < 1).
double anticoncentration_level(const EntryDistribution& dist);

class RandomVectorModel {
 public:
  explicit RandomVectorModel(std::vector<EntryDistribution> entries);
  static RandomVectorModel iid(std::size_t n, const EntryDistribution& law);

  std::size_t size() const { return entries_.size(); }
  const EntryDistribution& entry(std::size_t i) const { return entries_[i]; }
  std::span<const EntryDistribution> entries() const { return entries_; }
  // E||X||^2
  double second_moment() const { return second_moment_; }
  // sum_i Var(X_i)
  double total_variance() const { return total_variance_; }

 private:
  std::vector<EntryDistribution> entries_;
  double second_moment_ = 0.0;
  double total_variance_ = 0.0;
};

enum class Broadcast { single, per_row, per_column, grid };

class RandomMatrixModel {
 public:
  // `laws` has 1, rows, cols or rows*cols (column-major) entries according to `rule`.
  // A declared hs_budget (> 0) is validated against E||A||_HS^2.
  RandomMatrixModel(std::size_t rows, std::size_t cols, Broadcast rule,
                    std::vector<EntryDistribution> laws, double hs_budget = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Broadcast rule() const { return rule_; }
  const EntryDistribution& law(std::size_t i, std::size_t j) const;
  double expected_hs_sq() const { return expected_hs_sq_; }
  double hs_budget() const { return hs_budget_; }
  // Column j as a vector model in R^rows.
  RandomVectorModel column_model(std::size_t j) const;

 private:
  std::size_t rows_, cols_;
  Broadcast rule_;
  std::vector<EntryDistribution> laws_;
  double expected_hs_sq_ = 0.0;
  double hs_budget_ = 0.0;
};

Eigen::VectorXd sample_vector(const RandomVectorModel& model, const SeedSpec& seed, std::uint64_t index);
Eigen::MatrixXd sample_matrix(const RandomMatrixModel& model, const SeedSpec& seed, std::uint64_t index);

// In-place variants reusing caller storage (hot loops in experiments).
void sample_vector_into(const RandomVectorModel& model, Stream& rng, Eigen::Ref<Eigen::VectorXd> out);
void sample_matrix_into(const RandomMatrixModel& model, Stream& rng, Eigen::MatrixXd& out);

// Configuration constants that the theory leaves as unspecified absolutes.
struct ModelConstants {
  double b = 0.9;  // anti-concentration level
  double K = 2.0;  // Hilbert-Schmidt budget factor
};

}  // namespace lcdlab
