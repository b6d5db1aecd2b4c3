#include "lcdlab/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lcdlab/lcd.hpp"
#include "lcdlab/nets.hpp"
#include "lcdlab/parallel.hpp"

namespace lcdlab {

using nlohmann::json;

Eigen::VectorXd sample_compressible(std::size_t n, const SphereParams& params, Stream& rng) {
  const std::size_t k = params.sparsity(n);
  if (k == 0) throw std::invalid_argument("compressible probe: floor(delta n) is zero");
  if (n < 2) throw std::invalid_argument("compressible probe: need n >= 2");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);

  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  do {
    for (std::size_t i = 0; i < k; ++i) y[static_cast<Eigen::Index>(idx[i])] = rng.normal();
  } while (y.norm() == 0.0);
  y.normalize();

  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  double zn = 0.0;
  do {
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    z -= z.dot(y) * y;
    zn = z.norm();
  } while (zn < 1e-8);
  z /= zn;

  const double phi_max = 2.0 * std::asin(std::min(1.0, 0.99 * params.rho / 2.0));
  const double phi = phi_max * rng.uniform();
  Eigen::VectorXd x = std::cos(phi) * y + std::sin(phi) * z;
  return x / x.norm();
}

CompressibleProbeReport run_compressible_probe(const CompressibleProbeConfig& cfg) {
  cfg.params.validate();
  if (cfg.trials == 0 || cfg.samples_per_trial == 0) throw std::invalid_argument("compressible probe: empty budget");
  const auto model = cfg.a_model.build(cfg.N, cfg.n);
  const SeedSpec a_seed = cfg.seed.child(1), x_seed = cfg.seed.child(2);
  const double root_N = std::sqrt(static_cast<double>(cfg.N));

  CompressibleProbeReport rep;
  rep.trial_minima.assign(cfg.trials, 0.0);
  std::vector<double> worst_distance(cfg.trials, 0.0);
  std::vector<char> compressible(cfg.trials, 1);

  parallel_for(cfg.trials, 0, [&](std::size_t begin, std::size_t end) {
    Eigen::MatrixXd A;
    for (std::size_t t = begin; t < end; ++t) {
      Stream a_rng = a_seed.substream(t);
      sample_matrix_into(model, a_rng, A);
      Stream x_rng = x_seed.substream(t);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < cfg.samples_per_trial; ++s) {
        const Eigen::VectorXd x = sample_compressible(cfg.n, cfg.params, x_rng);
        const auto audit = compressibility(x, cfg.params);
        worst_distance[t] = std::max(worst_distance[t], audit.sparse_distance);
        if (!audit.is_compressible) compressible[t] = 0;
        best = std::min(best, (A * x).norm() / root_N);
      }
      rep.trial_minima[t] = best;
    }
  });

  std::vector<double> sorted = rep.trial_minima;
  std::sort(sorted.begin(), sorted.end());
  rep.envelope = sorted.front();
  rep.median = sorted[sorted.size() / 2];
  const auto below = std::count_if(sorted.begin(), sorted.end(), [&](double m) { return m < cfg.c; });
  rep.fraction_below_c = static_cast<double>(below) / static_cast<double>(cfg.trials);
  rep.max_sparse_distance = *std::max_element(worst_distance.begin(), worst_distance.end());
  rep.all_compressible = std::all_of(compressible.begin(), compressible.end(), [](char c) { return c != 0; });
  return rep;
}

json CompressibleProbeReport::to_json() const {
  return {{"probe", "compressible"},      {"trials", trial_minima.size()},
          {"envelope", envelope},         {"median", median},
          {"fraction_below_c", fraction_below_c}, {"max_sparse_distance", max_sparse_distance},
          {"all_compressible", all_compressible}};
}

double small_ball_probability(const EntryDistribution& law, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("small_ball_probability: eps must be >= 0");
  if (law.kind() == LawKind::gaussian) {
    const double s = law.sigma() * std::sqrt(2.0);
    return 0.5 * (std::erf((eps - law.mean()) / s) - std::erf((-eps - law.mean()) / s));
  }
  double p = 0.0;
  for (const auto& a : law.atoms())
    if (std::abs(a.value) <= eps) p += a.prob;
  return std::min(p, 1.0);
}

TensorizationProbeReport run_tensorization_probe(const TensorizationProbeConfig& cfg) {
  if (cfg.d == 0) throw std::invalid_argument("tensorization probe: d must be >= 1");
  if (cfg.trials == 0) throw std::invalid_argument("tensorization probe: trials must be >= 1");
  if (!(cfg.eps0 > 0.0 && cfg.eps0 <= 1.0)) throw std::invalid_argument("tensorization probe: eps0 must lie in (0, 1]");

  TensorizationProbeReport rep;
  constexpr int kEpsPoints = 200;
  const double log_lo = std::log(cfg.eps0);
  for (int k = 0; k <= kEpsPoints; ++k) {
    const double eps = std::exp(log_lo * (1.0 - static_cast<double>(k) / kEpsPoints));
    rep.K_hat = std::max(rep.K_hat, small_ball_probability(cfg.xi_law, eps) / eps);
  }
  if (cfg.xi_law.is_finite())
    for (const auto& a : cfg.xi_law.atoms()) {
      const double e = std::abs(a.value);
      if (e >= cfg.eps0 && e <= 1.0) rep.K_hat = std::max(rep.K_hat, small_ball_probability(cfg.xi_law, e) / e);
    }
  if (rep.K_hat > cfg.K_max)
    throw HypothesisFailure("tensorization probe: per-coordinate constant " + std::to_string(rep.K_hat) +
                            " exceeds K_max " + std::to_string(cfg.K_max));

  std::vector<double> sums(cfg.trials);
  parallel_for(cfg.trials, 0, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Stream rng = cfg.seed.substream(i);
      double s = 0.0;
      for (std::size_t j = 0; j < cfg.d; ++j) {
        const double x = cfg.xi_law.sample(rng);
        s += x * x;
      }
      sums[i] = s;
    }
  });
  std::sort(sums.begin(), sums.end());

  const double d = static_cast<double>(cfg.d);
  double log_c_sum = 0.0;
  for (double t : cfg.t_grid) {
    ExperimentRecord r;
    r.n = cfg.d;
    r.d = cfg.d;
    r.t = t;
    r.trials = cfg.trials;
    r.hits = static_cast<std::uint64_t>(std::upper_bound(sums.begin(), sums.end(), t * t * d) - sums.begin());
    r.phat = static_cast<double>(r.hits) / static_cast<double>(r.trials);
    r.stderr = std::sqrt(r.phat * (1.0 - r.phat) / static_cast<double>(r.trials));
    r.seed = cfg.seed.master_seed;
    rep.rows.push_back(r);
    if (r.hits == 0 || !(t > 0.0)) continue;
    const double log_c = std::log(r.phat) / d - std::log(rep.K_hat * t);
    log_c_sum += log_c;
    rep.C_envelope = std::max(rep.C_envelope, std::exp(log_c));
    ++rep.rows_used;
  }
  if (rep.rows_used == 0) return rep;
  rep.C_fit = std::exp(log_c_sum / static_cast<double>(rep.rows_used));
  for (const auto& r : rep.rows) {
    if (r.hits == 0 || !(r.t > 0.0)) continue;
    rep.worst_ratio = std::max(rep.worst_ratio, r.phat / std::pow(rep.C_fit * rep.K_hat * r.t, d));
  }
  return rep;
}

json TensorizationProbeReport::to_json() const {
  return {{"probe", "tensorize"}, {"K_hat", K_hat},           {"C_fit", C_fit},
          {"C_envelope", C_envelope}, {"worst_ratio", worst_ratio}, {"rows_used", rows_used}};
}

double unstructured_threshold(std::size_t n, double L, double u, double gamma,
                              const Eigen::Ref<const Eigen::VectorXd>& lambdas) {
  const double g = gamma / L;
  return std::min((2.0 * L / u) * std::exp(static_cast<double>(n) * g * g), 1.0 / lambdas.maxCoeff());
}

UnstructuredProbeReport run_unstructured_probe(const UnstructuredProbeConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("unstructured probe: trials must be >= 1");
  if (!(cfg.gamma >= 0.0)) throw std::invalid_argument("unstructured probe: gamma must be >= 0");
  LcdVariant{LcdKind::randomized_log, cfg.L, cfg.u}.validate();
  const auto n = static_cast<std::size_t>(cfg.lambdas.size());
  const auto sample = sample_structured_lattice(cfg.lambdas, cfg.params, cfg.seed, cfg.trials);
  const LawVector laws = symmetrized_laws(cfg.x_model.build(n));

  UnstructuredProbeReport rep;
  rep.n = n;
  rep.threshold = unstructured_threshold(n, cfg.L, cfg.u, cfg.gamma, cfg.lambdas);
  rep.samples = sample.points.size();
  rep.acceptance_rate = sample.acceptance_rate;

  std::vector<char> below(rep.samples, 0), member(rep.samples, 1);
  SolverOptions opts;
  opts.theta_max = rep.threshold;
  parallel_for(rep.samples, 0, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Eigen::VectorXd& w = sample.points[i];
      member[i] = in_structured_lattice(w, sample.steps, cfg.params) ? 1 : 0;
      const double norm = w.norm();
      if (norm == 0.0) continue;
      const auto res = log_rlcd(w / norm, laws, cfg.L, cfg.u, opts);
      below[i] = res.censored ? 0 : 1;
    }
  });
  rep.below = static_cast<std::size_t>(std::count(below.begin(), below.end(), 1));
  rep.all_members = std::all_of(member.begin(), member.end(), [](char c) { return c != 0; });
  rep.fraction = static_cast<double>(rep.below) / static_cast<double>(rep.samples);
  rep.stderr = std::sqrt(rep.fraction * (1.0 - rep.fraction) / static_cast<double>(rep.samples));
  return rep;
}

json UnstructuredProbeReport::to_json() const {
  return {{"probe", "unstructured"}, {"n", n},           {"threshold", threshold},
          {"samples", samples},      {"below", below},   {"fraction", fraction},
          {"stderr", stderr},        {"acceptance_rate", acceptance_rate}, {"all_members", all_members}};
}

}  // namespace lcdlab
