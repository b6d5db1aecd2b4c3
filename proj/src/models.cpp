#include "lcdlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace lcdlab {

namespace {

std::vector<Atom> merge_sorted(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (a.prob == 0.0) continue;
    if (!out.empty() && out.back().value == a.value)
      out.back().prob += a.prob;
    else
      out.push_back(a);
  }
  return out;
}

double sample_atoms(std::span<const Atom> atoms, std::span<const double> cumulative, Stream& rng) {
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), atoms.size() - 1);
  return atoms[k].value;
}

std::vector<double> cumulative_of(std::span<const Atom> atoms) {
  std::vector<double> cum(atoms.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    acc += atoms[k].prob;
    cum[k] = acc;
  }
  if (!cum.empty()) cum.back() = 1.0;
  return cum;
}

}  // namespace

EntryDistribution EntryDistribution::finite(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!(a.prob >= 0.0) || !std::isfinite(a.value))
      throw std::invalid_argument("finite law: probabilities must be >= 0 and values finite");
  }
  const double total =
      std::accumulate(atoms.begin(), atoms.end(), 0.0, [](double s, const Atom& a) { return s + a.prob; });
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("finite law: probabilities must sum to 1");

  EntryDistribution d;
  d.kind_ = LawKind::finite;
  d.atoms_ = merge_sorted(std::move(atoms));
  if (d.atoms_.size() > kMaxAtoms) throw BudgetError("finite law exceeds the 64-atom budget");
  for (const Atom& a : d.atoms_) d.mean_ += a.prob * a.value;
  for (const Atom& a : d.atoms_) d.variance_ += a.prob * (a.value - d.mean_) * (a.value - d.mean_);
  d.cumulative_ = cumulative_of(d.atoms_);
  return d;
}

EntryDistribution EntryDistribution::gaussian(double mean, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mean))
    throw std::invalid_argument("gaussian law: sigma must be positive and finite");
  EntryDistribution d;
  d.kind_ = LawKind::gaussian;
  d.mean_ = mean;
  d.sigma_ = sigma;
  d.variance_ = sigma * sigma;
  return d;
}

EntryDistribution EntryDistribution::point_mass(double value) { return finite({{value, 1.0}}); }

EntryDistribution EntryDistribution::rademacher() { return finite({{-1.0, 0.5}, {1.0, 0.5}}); }

EntryDistribution EntryDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p must lie in [0, 1]");
  return finite({{0.0, 1.0 - p}, {1.0, p}});
}

EntryDistribution EntryDistribution::scaled(double c) const {
  if (kind_ == LawKind::gaussian) {
    if (c == 0.0) return point_mass(0.0);
    return gaussian(c * mean_, std::abs(c) * sigma_);
  }
  std::vector<Atom> atoms(atoms_.begin(), atoms_.end());
  for (Atom& a : atoms) a.value *= c;
  return finite(std::move(atoms));
}

EntryDistribution EntryDistribution::shifted(double shift) const {
  if (kind_ == LawKind::gaussian) return gaussian(mean_ + shift, sigma_);
  std::vector<Atom> atoms(atoms_.begin(), atoms_.end());
  for (Atom& a : atoms) a.value += shift;
  return finite(std::move(atoms));
}

double EntryDistribution::sample(Stream& rng) const {
  if (kind_ == LawKind::gaussian) return mean_ + sigma_ * rng.normal();
  if (atoms_.size() == 1) return atoms_[0].value;
  return sample_atoms(atoms_, cumulative_, rng);
}

double EntryDistribution::charfn_modulus(double s) const {
  if (kind_ == LawKind::gaussian) return std::exp(-0.5 * sigma_ * sigma_ * s * s);
  std::complex<double> acc = 0.0;
  for (const Atom& a : atoms_) acc += a.prob * std::polar(1.0, s * a.value);
  return std::abs(acc);
}

SymmetrizedDistribution::SymmetrizedDistribution(const EntryDistribution& base) : base_(base) {
  if (base.kind() == LawKind::gaussian) {
    sigma_ = base.sigma() * std::sqrt(2.0);
    variance_ = 2.0 * base.variance();
    max_abs_ = 4.0 * sigma_;
    return;
  }
  const auto src = base.atoms();
  if (src.size() * src.size() > kMaxSymmetrizedAtoms)
    throw BudgetError("symmetrized law exceeds the 4096-atom budget");
  std::vector<Atom> diff;
  diff.reserve(src.size() * src.size());
  for (const Atom& a : src)
    for (const Atom& b : src) diff.push_back({a.value - b.value, a.prob * b.prob});
  atoms_ = merge_sorted(std::move(diff));
  for (const Atom& a : atoms_) {
    variance_ += a.prob * a.value * a.value;
    max_abs_ = std::max(max_abs_, std::abs(a.value));
  }
}

double SymmetrizedDistribution::sample(Stream& rng) const {
  if (base_.kind() == LawKind::gaussian) return sigma_ * rng.normal();
  return base_.sample(rng) - base_.sample(rng);
}

SymmetrizedDistribution symmetrize(const EntryDistribution& dist) { return SymmetrizedDistribution(dist); }

double anticoncentration_level(const EntryDistribution& dist) {
  if (dist.kind() == LawKind::gaussian) return std::erf(1.0 / (dist.sigma() * std::sqrt(2.0)));
  const auto atoms = dist.atoms();
  double best = 0.0;
  // Open windows |xi - u| < 1. Sliding one until its left end meets an atom gives the
  // half-open form [a_k, a_k + 2).
  std::size_t hi = 0;
  double mass = 0.0;
  for (std::size_t lo = 0; lo < atoms.size(); ++lo) {
    const double right = atoms[lo].value + 2.0;
    const double slack = 1e-12 * std::max(1.0, std::abs(right));
    while (hi < atoms.size() && atoms[hi].value < right - slack) mass += atoms[hi++].prob;
    best = std::max(best, mass);
    mass -= atoms[lo].prob;
  }
  return std::min(best, 1.0);
}

RandomVectorModel::RandomVectorModel(std::vector<EntryDistribution> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("vector model needs n >= 1");
  for (const auto& e : entries_) {
    second_moment_ += e.second_moment();
    total_variance_ += e.variance();
  }
}

RandomVectorModel RandomVectorModel::iid(std::size_t n, const EntryDistribution& law) {
  return RandomVectorModel(std::vector<EntryDistribution>(n, law));
}

RandomMatrixModel::RandomMatrixModel(std::size_t rows, std::size_t cols, Broadcast rule,
                                     std::vector<EntryDistribution> laws, double hs_budget)
    : rows_(rows), cols_(cols), rule_(rule), laws_(std::move(laws)), hs_budget_(hs_budget) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("matrix model needs positive shape");
  std::size_t expected = 1;
  switch (rule) {
    case Broadcast::single: expected = 1; break;
    case Broadcast::per_row: expected = rows; break;
    case Broadcast::per_column: expected = cols; break;
    case Broadcast::grid: expected = rows * cols; break;
  }
  if (laws_.size() != expected) throw std::invalid_argument("matrix model: law count does not match broadcast rule");
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) expected_hs_sq_ += law(i, j).second_moment();
  if (hs_budget_ > 0.0 && expected_hs_sq_ > hs_budget_ * (1.0 + 1e-12))
    throw std::invalid_argument("matrix model: E||A||_HS^2 exceeds the declared budget");
}

const EntryDistribution& RandomMatrixModel::law(std::size_t i, std::size_t j) const {
  switch (rule_) {
    case Broadcast::single: return laws_[0];
    case Broadcast::per_row: return laws_[i];
    case Broadcast::per_column: return laws_[j];
    case Broadcast::grid: break;
  }
  return laws_[i + j * rows_];
}

RandomVectorModel RandomMatrixModel::column_model(std::size_t j) const {
  std::vector<EntryDistribution> col;
  col.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) col.push_back(law(i, j));
  return RandomVectorModel(std::move(col));
}

void sample_vector_into(const RandomVectorModel& model, Stream& rng, Eigen::Ref<Eigen::VectorXd> out) {
  for (std::size_t i = 0; i < model.size(); ++i) out[static_cast<Eigen::Index>(i)] = model.entry(i).sample(rng);
}

void sample_matrix_into(const RandomMatrixModel& model, Stream& rng, Eigen::MatrixXd& out) {
  out.resize(static_cast<Eigen::Index>(model.rows()), static_cast<Eigen::Index>(model.cols()));
  for (std::size_t j = 0; j < model.cols(); ++j)
    for (std::size_t i = 0; i < model.rows(); ++i)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = model.law(i, j).sample(rng);
}

Eigen::VectorXd sample_vector(const RandomVectorModel& model, const SeedSpec& seed, std::uint64_t index) {
  Stream rng = seed.substream(index);
  Eigen::VectorXd out(static_cast<Eigen::Index>(model.size()));
  sample_vector_into(model, rng, out);
  return out;
}

Eigen::MatrixXd sample_matrix(const RandomMatrixModel& model, const SeedSpec& seed, std::uint64_t index) {
  Stream rng = seed.substream(index);
  Eigen::MatrixXd out;
  sample_matrix_into(model, rng, out);
  return out;
}

}  // namespace lcdlab
