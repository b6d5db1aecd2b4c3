#include "lcdlab/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/QR>

#include "lcdlab/geometry.hpp"
#include "lcdlab/lcd.hpp"
#include "lcdlab/lcd_multi.hpp"
#include "lcdlab/models.hpp"
#include "lcdlab/nets.hpp"
#include "lcdlab/smallball.hpp"

namespace lcdlab {

using nlohmann::json;

json PropertyResult::to_json() const {
  return {{"name", name}, {"cases", cases},  {"violated", violated}, {"vacuous", vacuous},
          {"worst_margin", worst_margin}, {"ok", ok()}, {"note", note}};
}

std::size_t SuiteReport::violations() const {
  std::size_t v = 0;
  for (const auto& r : results) v += r.violated;
  return v;
}

json SuiteReport::to_json() const {
  json props = json::array();
  for (const auto& r : results) props.push_back(r.to_json());
  return {{"seed", seed}, {"violations", violations()}, {"ok", ok()}, {"properties", props}};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tally {
  PropertyResult r;
  explicit Tally(std::string name) {
    r.name = std::move(name);
    r.worst_margin = kInf;
  }
  void record(double margin) {
    ++r.cases;
    r.worst_margin = std::min(r.worst_margin, margin);
    if (margin < 0.0) ++r.violated;
  }
  void vacuous() { ++r.vacuous; }
  PropertyResult done() {
    if (r.cases == 0) r.worst_margin = 0.0;
    return r;
  }
};

double uniform(Stream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

EntryDistribution random_finite_law(Stream& rng) {
  switch (rng.below(5)) {
    case 0:
      return EntryDistribution::rademacher();
    case 1:
      return EntryDistribution::finite({{-1.0, 1.0 / 3}, {0.0, 1.0 / 3}, {1.0, 1.0 / 3}});
    case 2:
      return EntryDistribution::bernoulli(uniform(rng, 0.2, 0.8));
    case 3:
      return EntryDistribution::rademacher().scaled(uniform(rng, 0.5, 1.5));
    default: {
      static constexpr double kValues[] = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
      const std::size_t m = 2 + rng.below(3);
      std::vector<Atom> atoms;
      for (std::size_t k = 0; k < m; ++k) atoms.push_back({kValues[rng.below(8)], uniform(rng, 0.1, 1.0)});
      double total = 0.0;
      for (const auto& a : atoms) total += a.prob;
      for (auto& a : atoms) a.prob /= total;
      auto law = EntryDistribution::finite(atoms);
      if (law.atoms().size() < 2) return EntryDistribution::rademacher();
      return law;
    }
  }
}

LawVector random_laws(Stream& rng, std::size_t n, bool iid) {
  LawVector laws;
  const auto first = random_finite_law(rng);
  for (std::size_t i = 0; i < n; ++i) laws.emplace_back(iid || i == 0 ? first : random_finite_law(rng));
  return laws;
}

Eigen::VectorXd gaussian_vector(Stream& rng, std::size_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
  return v;
}

Eigen::VectorXd unit_vector(Stream& rng, std::size_t n) {
  Eigen::VectorXd v;
  do v = gaussian_vector(rng, n);
  while (v.norm() < 1e-6);
  return v / v.norm();
}

Eigen::VectorXd incompressible_unit(Stream& rng, std::size_t n, const SphereParams& params) {
  for (;;) {
    Eigen::VectorXd v = unit_vector(rng, n);
    if (!compressibility(v, params).is_compressible) return v;
  }
}

Eigen::MatrixXd random_orthogonal(Stream& rng, std::size_t d) {
  Eigen::MatrixXd g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
}

double rel_slack(double tol, double value) {
  return 2.0 * std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

SolverOptions fast_opts(double theta_max = 200.0) {
  SolverOptions o;
  o.theta_max = theta_max;
  return o;
}

}  // namespace

PropertyResult prop_lcd_trivial_lower_bound(const SeedSpec& seed, std::size_t count) {
  Tally t("lcd.trivial_lower_bound");
  const auto opts = fast_opts();
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 1 + rng.below(8);
    const auto laws = random_laws(rng, n, rng.below(2) == 0);
    const Eigen::VectorXd v = gaussian_vector(rng, n) * uniform(rng, 0.2, 2.0);
    const double L = uniform(rng, 0.5, 2.0), u = uniform(rng, 0.05, 0.9);
    const auto res = log_rlcd(v, laws, L, u, opts);
    const double floor_value = std::min(L / (u * v.norm()), opts.theta_max);
    t.record(res.value - floor_value + rel_slack(opts.bisect_tol, floor_value));
  }
  return t.done();
}

PropertyResult prop_lcd_scaling(const SeedSpec& seed, std::size_t count) {
  Tally t("lcd.scaling");
  const auto opts = fast_opts();
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 1 + rng.below(6);
    const auto laws = random_laws(rng, n, false);
    const Eigen::VectorXd v = unit_vector(rng, n);
    const double c = uniform(rng, 0.5, 2.0), L = uniform(rng, 0.5, 2.0), u = uniform(rng, 0.05, 0.5);
    const auto a = log_rlcd(v, laws, L, u, opts);
    if (a.censored || a.value * 2.0 > opts.theta_max) {
      t.vacuous();
      continue;
    }
    const auto b = log_rlcd(c * v, laws, L, u, opts);
    const double tol = rel_slack(opts.bisect_tol, a.value / std::min(c, 1.0));
    t.record(tol - std::abs(b.value - a.value / c));
  }
  return t.done();
}

PropertyResult prop_lcd_stability(const SeedSpec& seed, std::size_t count) {
  Tally t("lcd.stability");
  const auto opts = fast_opts();
  const double r1 = 0.5, r2 = 1.5;
  for (std::size_t k = 0; t.r.cases < count && k < 50 * count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 1 + rng.below(6);
    const auto laws = random_laws(rng, n, rng.below(2) == 0);
    const Eigen::VectorXd x = unit_vector(rng, n) * uniform(rng, 0.6, 1.4);
    const double L = uniform(rng, 0.5, 2.0), u = uniform(rng, 0.05, 0.25);
    const auto D = log_rlcd(x, laws, L, u, opts);
    const double lp = std::log(u * D.value * x.norm() / L);
    if (D.censored || !(lp > 0.0)) {
      t.vacuous();
      continue;
    }
    const double allowance = 0.125 * (L * L) / (D.value * D.value) * lp;
    const double eps = std::sqrt(allowance / total_variance(laws)) * uniform(rng, 0.2, 0.99);
    Eigen::VectorXd y = x;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += eps * uniform(rng, -0.99, 0.99);
    const auto check = check_stability(x, y, laws, L, u, r1, r2, eps, opts);
    if (check.verdict == Verdict::vacuous) {
      t.vacuous();
      continue;
    }
    const double tol = rel_slack(opts.bisect_tol, check.D);
    t.record(std::min(check.D + tol - check.upper_side, check.lower_side - check.D + tol));
  }
  return t.done();
}

PropertyResult prop_lcd_monotone_in_L(const SeedSpec& seed, std::size_t count) {
  Tally t("lcd.monotone_in_L");
  const auto opts = fast_opts(1000.0);
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 2 + rng.below(7);
    const auto laws = random_laws(rng, n, rng.below(2) == 0);
    const Eigen::VectorXd x = unit_vector(rng, n) * uniform(rng, 0.5, 3.0);
    const double L2 = uniform(rng, 0.3, 1.5), L1 = L2 * uniform(rng, 1.1, 3.0), u = uniform(rng, 0.05, 0.5);
    const auto check = check_monotone_in_L(x, laws, L1, L2, u, opts);
    if (check.verdict == Verdict::vacuous) {
      t.vacuous();
      continue;
    }
    t.record(check.margin + rel_slack(opts.bisect_tol, check.lcd_small_L));
  }
  return t.done();
}

PropertyResult prop_lcd_comparison(const SeedSpec& seed, std::size_t count) {
  Tally t("lcd.comparison");
  const auto opts = fast_opts(1000.0);
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 1 + rng.below(8);
    const auto laws = random_laws(rng, n, rng.below(2) == 0);
    const Eigen::VectorXd v = unit_vector(rng, n) * uniform(rng, 0.5, 2.0);
    const double L = uniform(rng, 0.5, 2.0), u = uniform(rng, 0.05, 0.5);
    const double tt = std::min(0.99, uniform(rng, u * u / 2.0, 0.99));
    const double gamma = uniform(rng, 0.05, 0.5);
    const auto check = check_comparison(v, laws, L, u, gamma, tt, opts);
    t.record(check.margin + rel_slack(opts.bisect_tol, std::min(check.rlcd, check.ceiling)));
  }
  t.r.note = "reading a=gamma, s=u";
  return t.done();
}

namespace {

struct LowerBoundSample {
  double ratio = 0.0;  // normalized LCD, value * sqrt(Var X) / n
  bool censored = false;
};

constexpr double kAntiConcentration = 0.9;

LawVector anticoncentrated_laws(Stream& rng, std::size_t n) {
  LawVector laws;
  while (laws.size() < n) {
    const auto law = random_finite_law(rng);
    if (anticoncentration_level(law) <= kAntiConcentration) laws.emplace_back(law);
  }
  return laws;
}

template <typename Score>
PropertyResult fitted_constant_protocol(const char* name, const SeedSpec& seed, std::size_t count, Score score) {
  Tally t(name);
  const SphereParams params;
  auto ensemble = [&](const SeedSpec& s) {
    std::vector<LowerBoundSample> out;
    for (std::size_t k = 0; k < count; ++k) {
      Stream rng = s.substream(k);
      static constexpr std::size_t kSizes[] = {10, 12, 16};
      const std::size_t n = kSizes[rng.below(3)];
      const auto laws = anticoncentrated_laws(rng, n);
      const Eigen::VectorXd x = incompressible_unit(rng, n, params);
      out.push_back(score(x, laws, static_cast<double>(n)));
    }
    return out;
  };
  double c = kInf;
  for (const auto& s : ensemble(seed.child(1)))
    if (!s.censored) c = std::min(c, 0.5 * s.ratio);
  if (!(c > 0.0) || !std::isfinite(c)) {
    t.r.note = "no positive constant on the calibration ensemble";
    t.r.vacuous = count;
    return t.done();
  }
  for (const auto& s : ensemble(seed.child(2))) {
    if (s.censored) {
      t.vacuous();
      continue;
    }
    t.record(s.ratio - c);
  }
  t.r.note = "fitted c = " + fmt(c);
  return t.done();
}

}  // namespace

PropertyResult prop_lcd_lower_bound(const SeedSpec& seed, std::size_t count) {
  const auto opts = fast_opts(1000.0);
  return fitted_constant_protocol("lcd.lower_bound_fit", seed, count,
                                  [&](const Eigen::VectorXd& x, const LawVector& laws, double n) {
                                    const auto r = log_rlcd(x, laws, 1.0, 0.25, opts);
                                    return LowerBoundSample{r.value * std::sqrt(total_variance(laws)) / n, r.censored};
                                  });
}

PropertyResult prop_lcd_grid_lower_bound(const SeedSpec& seed, std::size_t count) {
  const auto opts = fast_opts(1000.0);
  const double u = 0.25;
  const auto grid = lgrid(1.0);
  return fitted_constant_protocol("lcd.grid_lower_bound_fit", seed, count,
                                  [&](const Eigen::VectorXd& x, const LawVector& laws, double n) {
                                    LowerBoundSample best{-kInf, true};
                                    for (double ell : grid.elements) {
                                      const auto r = log_rlcd(x, laws, ell, u, opts);
                                      if (r.censored) continue;
                                      best.censored = false;
                                      best.ratio = std::max(best.ratio, (r.value - ell / u) *
                                                                            std::sqrt(total_variance(laws)) / n);
                                    }
                                    return best;
                                  });
}

PropertyResult prop_subspace_matches_matrix(const SeedSpec& seed, std::size_t count) {
  Tally t("lcd.subspace_matches_matrix");
  const auto opts = fast_opts(200.0);
  constexpr double kNetGap = 0.05;
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t N = 6;
    Eigen::MatrixXd g(static_cast<Eigen::Index>(N), 2);
    for (Eigen::Index j = 0; j < 2; ++j)
      for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
    const Eigen::MatrixXd U = ColumnSpan(g).basis();
    const auto laws = random_laws(rng, N, true);
    const auto sub = log_rlcd_subspace(U, laws, 1.0, 0.25, 256, seed.child(k), opts);
    const auto mat = log_rlcd_matrix(U.transpose(), laws, 1.0, 0.25, 256, seed.child(k), opts);
    if (sub.result.censored && mat.result.censored) {
      t.vacuous();
      continue;
    }
    const double best = std::min(sub.result.value, mat.result.value);
    const double gap = std::abs(sub.result.value - mat.result.value);
    t.record(kNetGap * best + rel_slack(opts.bisect_tol, best) - gap);
  }
  t.r.note = "relative net gap 0.05";
  return t.done();
}

PropertyResult prop_weight_net_domination(const SeedSpec& seed, std::size_t count) {
  Tally t("nets.weight_net_domination");
  static constexpr double kKappas[] = {3.0, 5.0, 10.0};
  std::size_t cell = 0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (double kappa : kKappas) {
      const auto net = weight_net(kappa, n);
      const SeedSpec cell_seed = seed.child(cell++);
      for (std::size_t k = 0; k < count; ++k) {
        Stream rng = cell_seed.substream(k);
        Eigen::VectorXd w(static_cast<Eigen::Index>(n));
        double total = 0.0;
        for (Eigen::Index i = 0; i < w.size(); ++i) total += (w[i] = -std::log(rng.uniform()));
        const double budget = static_cast<double>(n) * std::log(kappa) * rng.uniform();
        const Eigen::VectorXd beta = (-(w / total) * budget).array().exp().matrix();
        const auto idx = net.dominated_by(beta);
        if (!idx) {
          t.record(-1.0);
          continue;
        }
        const Eigen::VectorXd alpha = net.element(*idx).alpha;
        t.record((beta - alpha).minCoeff());
      }
    }
  return t.done();
}

PropertyResult prop_regularized_hs_bounds(const SeedSpec& seed, std::size_t count) {
  Tally t("nets.regularized_hs_bounds");
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 1 + rng.below(10);
    Eigen::VectorXd norms(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < norms.size(); ++i) norms[i] = std::exp(3.0 * rng.normal());
    const double k1 = uniform(rng, 2.8, 5.0), k2 = k1 * uniform(rng, 1.0, 3.0);
    const double b1 = regularized_hs(norms, k1).value, b2 = regularized_hs(norms, k2).value;
    const double scale = norms.sum();
    const double tol = 1e-12 * scale;
    t.record(std::min(b1 - b2 + tol, scale - b1 + tol));
  }
  return t.done();
}

PropertyResult prop_hs_concentration(const SeedSpec& seed, std::size_t draws, std::size_t n) {
  Tally t("nets.hs_concentration_n" + std::to_string(n));
  const double kappa = 3.0;
  const double nn = static_cast<double>(n);
  const double expected = nn * nn;
  std::size_t exceed = 0;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < draws; ++k) {
    Stream rng = seed.substream(k);
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = rng.normal();
    if (regularized_hs_matrix(A, kappa).value >= 2.0 * expected) ++exceed;
  }
  const double fraction = static_cast<double>(exceed) / static_cast<double>(draws);
  const double bound = std::pow(kappa / std::sqrt(2.0), -2.0 * nn);
  t.record(bound - fraction);
  t.r.note = "fraction " + fmt(fraction) + " vs bound " + fmt(bound);
  return t.done();
}

PropertyResult prop_level_sets(const SeedSpec& seed, std::size_t count) {
  Tally t("nets.level_set_inclusion");
  const double theta_max = 400.0;
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 2 + rng.below(4), N = 1 + rng.below(3);
    std::vector<LawVector> cols;
    for (std::size_t j = 0; j < N; ++j) cols.push_back(random_laws(rng, n, true));
    const Eigen::VectorXd x = unit_vector(rng, n) * uniform(rng, 0.55, 1.45);
    LevelSetQuery q;
    q.L = uniform(rng, 0.5, 2.0);
    q.u = uniform(rng, 0.02, 0.16);
    SolverOptions opts;
    opts.theta_max = theta_max;
    const auto m = log_rlcd_columns(cols, x, q.L, q.u, opts);
    if (m.result.censored) {
      t.vacuous();
      continue;
    }
    q.D = std::min(m.result.value * uniform(rng, 0.5, 1.0), theta_max / 2.0);
    const auto rep = level_set_classify(x, cols, q, theta_max);
    if (!rep.in_S) {
      t.vacuous();
      continue;
    }
    t.record(rep.in_S_tilde ? 1.0 : -1.0);
  }
  return t.done();
}

PropertyResult prop_net_certificates(const SeedSpec& seed, std::size_t count, std::size_t max_n) {
  Tally t("nets.approximation_certificates");
  std::size_t derandomized = 0;
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 1 + rng.below(max_n);
    const std::size_t N = n + rng.below(n + 1);
    Eigen::MatrixXd A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const double scale = std::exp(2.0 * rng.normal());
      for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = scale * rng.normal();
    }
    const Eigen::VectorXd x = unit_vector(rng, n);
    const double kappa = uniform(rng, 2.8, 6.0), eps = uniform(rng, 0.01, 1.0);
    const auto approx = approximate_on_net(A, x, kappa, eps);
    if (approx.derandomized) ++derandomized;
    const double root_n = std::sqrt(static_cast<double>(n));
    const double B = regularized_hs_matrix(A, kappa).value;
    const Eigen::VectorXd diff = x - approx.y;
    const double linf = diff.cwiseAbs().maxCoeff();
    const double mat = (A * diff).norm();
    const double linf_bound = eps / root_n;
    const double mat_bound = eps * std::sqrt(B) / root_n;
    t.record(std::min((linf_bound - linf) / linf_bound + 1e-12, (mat_bound - mat) / mat_bound + 1e-12));
  }
  t.r.note = std::to_string(derandomized) + " derandomized roundings";
  return t.done();
}

PropertyResult prop_colspan_invariance(const SeedSpec& seed, std::size_t count) {
  Tally t("geometry.colspan_invariance");
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 2 + rng.below(20), m = 1 + rng.below(n - 1);
    Eigen::MatrixXd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = rng.normal();
    const Eigen::VectorXd x = gaussian_vector(rng, n);
    Eigen::MatrixXd B = A;
    for (Eigen::Index j = B.cols() - 1; j > 0; --j) B.col(j).swap(B.col(static_cast<Eigen::Index>(rng.below(j + 1))));
    for (Eigen::Index j = 0; j < B.cols(); ++j) B.col(j) *= (rng.below(2) ? 1.0 : -1.0) * uniform(rng, 0.2, 5.0);
    if (B.cols() > 1) B.col(0) += uniform(rng, -3.0, 3.0) * B.col(1);
    t.record(1e-8 - std::abs(distance_to_colspan(A, x) - distance_to_colspan(B, x)));
  }
  return t.done();
}

PropertyResult prop_lattice_shift(const SeedSpec& seed, std::size_t count) {
  Tally t("geometry.lattice_shift");
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 1 + rng.below(10);
    const Eigen::VectorXd w = gaussian_vector(rng, n) * 3.0;
    Eigen::VectorXd z(w.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = static_cast<double>(static_cast<long>(rng.below(41)) - 20);
    t.record(1e-9 - std::abs(dist_to_integer_lattice(w + z) - dist_to_integer_lattice(w)));
  }
  return t.done();
}

PropertyResult prop_levy_monotone(const SeedSpec& seed, std::size_t count) {
  Tally t("smallball.levy_monotone");
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t d = 1 + rng.below(3);
    std::vector<EntryDistribution> coords;
    for (std::size_t i = 0; i < d; ++i) coords.push_back(random_finite_law(rng));
    const auto law = PointLaw::product(coords);
    double prev = 0.0, worst = kInf;
    for (double r = 0.05; r <= 3.0; r *= 1.37) {
      const double v = levy_concentration(law, r).value;
      worst = std::min(worst, v - prev + 1e-12);
      prev = v;
    }
    t.record(worst);
  }
  return t.done();
}

PropertyResult prop_levy_isometry(const SeedSpec& seed, std::size_t count) {
  Tally t("smallball.levy_isometry");
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t d = 1 + rng.below(3);
    std::vector<EntryDistribution> coords;
    for (std::size_t i = 0; i < d; ++i) coords.push_back(random_finite_law(rng));
    const auto law = PointLaw::product(coords);
    const auto rotated = law.transformed(random_orthogonal(rng, d));
    const double r = uniform(rng, 0.1, 2.5) + 1e-7 * std::sqrt(2.0);
    t.record(1e-9 - std::abs(levy_concentration(law, r).value - levy_concentration(rotated, r).value));
  }
  return t.done();
}

std::vector<std::pair<std::string, EntryDistribution>> esseen_suite() {
  return {
      {"rademacher", EntryDistribution::rademacher()},
      {"rademacher*2", EntryDistribution::rademacher().scaled(2.0)},
      {"rademacher*3.5", EntryDistribution::rademacher().scaled(3.5)},
      {"bernoulli(0.5)", EntryDistribution::bernoulli(0.5)},
      {"bernoulli(0.3)", EntryDistribution::bernoulli(0.3)},
      {"uniform{0,2,4}", EntryDistribution::finite({{0, 1.0 / 3}, {2, 1.0 / 3}, {4, 1.0 / 3}})},
      {"uniform{0..9}", EntryDistribution::finite({{0, .1}, {1, .1}, {2, .1}, {3, .1}, {4, .1},
                                                   {5, .1}, {6, .1}, {7, .1}, {8, .1}, {9, .1}})},
      {"{-3:.25,0:.5,3:.25}", EntryDistribution::finite({{-3, .25}, {0, .5}, {3, .25}})},
      {"{0:.6,5:.4}", EntryDistribution::finite({{0, .6}, {5, .4}})},
  };
}

PropertyResult prop_esseen_dominates() {
  Tally t("smallball.esseen_dominates");
  for (const auto& [name, law] : esseen_suite()) {
    const auto phi = charfn_modulus_of(PointLaw::from(law));
    const double bound = esseen_bound(phi, 1, 1.0);
    const double exact = levy_concentration(law, 1.0).value;
    t.record(bound - exact);
  }
  return t.done();
}

PropertyResult prop_sbp_monotone(const SeedSpec& seed, std::size_t count) {
  Tally t("smallball.sbp_monotone");
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const int d = 1 + static_cast<int>(rng.below(4));
    const double L = std::sqrt((d + 2) / 2.0) * uniform(rng, 1.0, 2.0) + 1.0;
    const double u = uniform(rng, 0.05, 0.5), C = uniform(rng, 0.2, 2.0);
    const double D1 = uniform(rng, 1.0, 50.0), D2 = D1 * uniform(rng, 1.0, 4.0);
    const double t1 = uniform(rng, 0.0, 1.0), t2 = t1 * uniform(rng, 1.0, 3.0);
    SbpBoundInputs in{D1, L, u, d, t1, uniform(rng, 0.5, 2.0), C};
    const double f11 = sbp_formula_bound(in);
    in.t = t2;
    const double f12 = sbp_formula_bound(in);
    in.D = D2;
    const double f22 = sbp_formula_bound(in);
    const double p11 = projection_sbp_bound(D1, L, u, d, t1, C), p12 = projection_sbp_bound(D1, L, u, d, t2, C);
    const double p22 = projection_sbp_bound(D2, L, u, d, t2, C);
    const double tol = 1e-12 * std::max({f12, p12, 1.0});
    t.record(std::min({f12 - f11, f12 - f22, p12 - p11, p12 - p22}) + tol);
  }
  return t.done();
}

PropertyResult prop_sampling_determinism(const SeedSpec& seed, std::size_t count) {
  Tally t("models.sampling_determinism");
  for (std::size_t k = 0; k < count; ++k) {
    Stream rng = seed.substream(k);
    const std::size_t n = 1 + rng.below(16);
    std::vector<EntryDistribution> entries;
    for (std::size_t i = 0; i < n; ++i)
      entries.push_back(rng.below(3) == 0 ? EntryDistribution::gaussian(uniform(rng, -1, 1), uniform(rng, 0.5, 2))
                                          : random_finite_law(rng));
    const RandomVectorModel model(entries);
    const SeedSpec s{rng.next_u64()};
    const auto a = sample_vector(model, s, k), b = sample_vector(model, s, k);
    t.record(a == b ? 1.0 : -1.0);
  }
  return t.done();
}

SuiteReport run_property_suite(const SeedSpec& seed) {
  SuiteReport rep;
  rep.seed = seed.master_seed;
  std::uint64_t tag = 0;
  auto next = [&] { return seed.child(++tag); };
  rep.results.push_back(prop_lcd_trivial_lower_bound(next(), 200));
  rep.results.push_back(prop_lcd_scaling(next(), 200));
  rep.results.push_back(prop_lcd_stability(next(), 200));
  rep.results.push_back(prop_lcd_monotone_in_L(next(), 200));
  rep.results.push_back(prop_lcd_comparison(next(), 100));
  rep.results.push_back(prop_lcd_lower_bound(next(), 60));
  rep.results.push_back(prop_lcd_grid_lower_bound(next(), 30));
  rep.results.push_back(prop_subspace_matches_matrix(next(), 20));
  rep.results.push_back(prop_weight_net_domination(next(), 500));
  rep.results.push_back(prop_regularized_hs_bounds(next(), 500));
  rep.results.push_back(prop_hs_concentration(next(), 10000, 4));
  rep.results.push_back(prop_hs_concentration(next(), 10000, 8));
  rep.results.push_back(prop_level_sets(next(), 100));
  rep.results.push_back(prop_net_certificates(next(), 1000));
  rep.results.push_back(prop_colspan_invariance(next(), 500));
  rep.results.push_back(prop_lattice_shift(next(), 500));
  rep.results.push_back(prop_levy_monotone(next(), 100));
  rep.results.push_back(prop_levy_isometry(next(), 100));
  rep.results.push_back(prop_esseen_dominates());
  rep.results.push_back(prop_sbp_monotone(next(), 500));
  rep.results.push_back(prop_sampling_determinism(next(), 100));
  return rep;
}

}  // namespace lcdlab
