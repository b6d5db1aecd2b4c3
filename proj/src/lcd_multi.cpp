#include "lcdlab/lcd_multi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lcdlab {

namespace {

double slack(const SolverOptions& opts, double value) {
  return 2.0 * std::max(opts.bisect_tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value));
}

// Later solves only need to know whether they beat the current best, so the ceiling shrinks to it.
SolverOptions capped(const SolverOptions& opts, double best) {
  SolverOptions o = opts;
  o.theta_max = std::min(opts.theta_max, std::max(best, 1e3 * opts.bisect_tol));
  return o;
}

Eigen::VectorXd random_unit(std::size_t k, Stream rng) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(k));
  do {
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
  } while (w.norm() == 0.0);
  return w.normalized();
}

struct DirectionSearch {
  Eigen::MatrixXd map;  // N x k, direction w -> vector map * w
  const LawVector& laws;
  double L, u;
  SolverOptions opts;
  DirectionalLcd best;

  DirectionSearch(const Eigen::Ref<const Eigen::MatrixXd>& m, const LawVector& l, double L_, double u_,
                  const SolverOptions& o)
      : map(m), laws(l), L(L_), u(u_), opts(o) {
    best.result = {opts.theta_max, true, 0.0};
  }

  bool offer(const Eigen::VectorXd& w) {
    ++best.directions_tried;
    const Eigen::VectorXd v = map * w;
    if (v.norm() == 0.0) return false;
    const LcdResult r = log_rlcd(v, laws, L, u, capped(opts, best.result.value));
    if (r.censored || r.value >= best.result.value) {
      if (best.direction.size() == 0) best.direction = w;
      return false;
    }
    best.result = r;
    best.direction = w;
    return true;
  }
};

}  // namespace

double total_variance(const LawVector& laws) {
  double acc = 0.0;
  for (const auto& l : laws) acc += 0.5 * l.variance();
  return acc;
}

ColumnsLcd log_rlcd_columns(const std::vector<LawVector>& column_laws, const Eigen::Ref<const Eigen::VectorXd>& v,
                            double L, double u, const SolverOptions& opts) {
  if (column_laws.empty()) throw std::invalid_argument("log_rlcd_columns: no columns");
  for (const auto& c : column_laws)
    if (c.size() != static_cast<std::size_t>(v.size()))
      throw std::invalid_argument("log_rlcd_columns: column law length differs from v");
  ColumnsLcd out;
  out.result = log_rlcd(v, column_laws[0], L, u, opts);
  for (std::size_t i = 1; i < column_laws.size(); ++i) {
    const LcdResult r = log_rlcd(v, column_laws[i], L, u, capped(opts, out.result.value));
    if (!r.censored && r.value < out.result.value) {
      out.result = r;
      out.argmin = i;
    }
  }
  return out;
}

DirectionalLcd log_rlcd_matrix(const Eigen::Ref<const Eigen::MatrixXd>& V, const LawVector& laws, double L, double u,
                               std::size_t direction_budget, const SeedSpec& seed, const SolverOptions& opts) {
  if (direction_budget == 0) throw std::invalid_argument("log_rlcd_matrix: direction_budget must be positive");
  if (V.rows() < 1) throw std::invalid_argument("log_rlcd_matrix: V needs at least one row");
  if (laws.size() != static_cast<std::size_t>(V.cols()))
    throw std::invalid_argument("log_rlcd_matrix: need one law per column of V");
  const Eigen::MatrixXd Vt = V.transpose();
  DirectionSearch search(Vt, laws, L, u, opts);
  if (V.rows() == 1) {
    search.offer(Eigen::VectorXd::Ones(1));
    return search.best;
  }
  const SeedSpec dirs = seed.child(0x6d6174);
  for (std::size_t k = 0; k < direction_budget; ++k)
    search.offer(random_unit(static_cast<std::size_t>(V.rows()), dirs.substream(k)));
  return search.best;
}

DirectionalLcd log_rlcd_subspace(const Eigen::Ref<const Eigen::MatrixXd>& basis, const LawVector& laws, double L,
                                 double u, std::size_t net_resolution, const SeedSpec& seed,
                                 const SolverOptions& opts) {
  const Eigen::Index k = basis.cols();
  if (k < 1) throw std::invalid_argument("log_rlcd_subspace: empty basis");
  if (laws.size() != static_cast<std::size_t>(basis.rows()))
    throw std::invalid_argument("log_rlcd_subspace: need one law per ambient coordinate");
  const Eigen::MatrixXd gram = basis.transpose() * basis - Eigen::MatrixXd::Identity(k, k);
  if (gram.cwiseAbs().maxCoeff() > 1e-9) throw std::invalid_argument("log_rlcd_subspace: basis is not orthonormal");
  if (k >= 2 && net_resolution == 0) throw std::invalid_argument("log_rlcd_subspace: net_resolution must be positive");

  DirectionSearch search(basis, laws, L, u, opts);
  if (k == 1) {
    search.offer(Eigen::VectorXd::Ones(1));
    return search.best;
  }

  for (Eigen::Index j = 0; j < k; ++j) search.offer(Eigen::VectorXd::Unit(k, j));

  double spacing;
  if (k == 2) {
    for (std::size_t j = 0; j < net_resolution; ++j) {
      const double phi = std::numbers::pi * static_cast<double>(j) / static_cast<double>(net_resolution);
      search.offer(Eigen::Vector2d(std::cos(phi), std::sin(phi)));
    }
    spacing = std::numbers::pi / static_cast<double>(net_resolution);
  } else {
    const SeedSpec dirs = seed.child(0x737562);
    for (std::size_t j = 0; j < net_resolution; ++j)
      search.offer(random_unit(static_cast<std::size_t>(k), dirs.substream(j)));
    spacing = std::pow(static_cast<double>(net_resolution), -1.0 / static_cast<double>(k - 1));
  }

  // Coordinate-wise refinement around the best direction with a shrinking step.
  double step = spacing;
  for (int round = 0; round < 60 && step > 1e-7; ++round) {
    const Eigen::VectorXd centre = search.best.direction;
    bool improved = false;
    if (k == 2) {
      const double phi = std::atan2(centre[1], centre[0]);
      for (double sgn : {-1.0, 1.0})
        improved |= search.offer(Eigen::Vector2d(std::cos(phi + sgn * step), std::sin(phi + sgn * step)));
    } else {
      for (Eigen::Index j = 0; j < k; ++j) {
        for (double sgn : {-1.0, 1.0}) {
          Eigen::VectorXd w = centre;
          w[j] += sgn * step;
          if (w.norm() > 0.0) improved |= search.offer(w.normalized());
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return search.best;
}

LGrid lgrid(double L) {
  if (!(L >= 1.0) || !std::isfinite(L)) throw std::invalid_argument("lgrid: L must be >= 1");
  LGrid g;
  g.base = L;
  g.elements = {L, 2.0 * L};
  const auto count = static_cast<int>(std::floor(10.0 * L + 1e-9));
  for (int i = 1; i <= count; ++i) g.elements.push_back(std::min(L + i / 10.0, 2.0 * L));
  std::sort(g.elements.begin(), g.elements.end());
  std::vector<double> unique;
  for (double e : g.elements)
    if (unique.empty() || e - unique.back() > 1e-12 * std::max(1.0, e)) unique.push_back(e);
  g.elements = std::move(unique);
  return g;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::hold:
      return "hold";
    case Verdict::violated:
      return "violated";
    case Verdict::vacuous:
      return "vacuous";
    case Verdict::hold_at_ceiling:
      return "hold-at-ceiling";
  }
  return "?";
}

MonotoneCheck check_monotone_in_L(const Eigen::Ref<const Eigen::VectorXd>& x, const LawVector& laws, double L1,
                                  double L2, double u, const SolverOptions& opts) {
  if (!(L1 > L2 && L2 > 0.0)) throw std::invalid_argument("check_monotone_in_L: need L1 > L2 > 0");
  const double nx = x.norm();
  if (nx == 0.0) throw std::invalid_argument("check_monotone_in_L: x must be nonzero");

  MonotoneCheck out;
  const double a = L1 * L1, b = L2 * L2;
  const double log_power = -std::log(u) + (a * std::log(L1) - b * std::log(L2)) / (a - b);
  const double log_threshold = std::max(std::log(L1 / u), log_power) - std::log(nx);
  out.hypothesis_threshold = std::exp(log_threshold);

  const LcdResult small = log_rlcd(x, laws, L2, u, opts);
  out.lcd_small_L = small.value;
  if (std::log(small.value) < log_threshold) return out;

  const LcdResult large = log_rlcd(x, laws, L1, u, opts);
  out.lcd_large_L = large.value;
  out.margin = small.value - large.value;
  if (large.value <= small.value + slack(opts, small.value))
    out.verdict = small.censored ? Verdict::hold_at_ceiling : Verdict::hold;
  else
    out.verdict = Verdict::violated;
  return out;
}

ComparisonCheck check_comparison(const Eigen::Ref<const Eigen::VectorXd>& v, const LawVector& laws, double L,
                                 double u, double gamma, double t, const SolverOptions& opts) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("check_comparison: t must lie in (0, 1)");
  if (!(gamma > 0.0)) throw std::invalid_argument("check_comparison: gamma must be positive");
  if (u * u > 2.0 * t) throw std::invalid_argument("check_comparison: requires u^2 <= 2t");
  const double nv = v.norm();
  if (nv == 0.0) throw std::invalid_argument("check_comparison: v must be nonzero");

  const double n = static_cast<double>(v.size());
  ComparisonCheck out;
  out.reading = "a=gamma, s=u";
  const LcdResult lg = log_rlcd(v, laws, L, u, opts);
  const LcdResult rl =
      lcd_infimum(LcdQuery::make({LcdKind::randomized, gamma * std::sqrt(n), t}, v, laws, opts));
  out.log_rlcd = lg.value;
  out.rlcd = rl.value;
  out.ceiling = (L / (u * nv)) * std::exp(n * (gamma / L) * (gamma / L));
  const double floor_value = std::min(rl.value, out.ceiling);
  out.margin = lg.value - floor_value;
  if (out.margin >= -slack(opts, floor_value))
    out.verdict = rl.censored && floor_value == rl.value ? Verdict::hold_at_ceiling : Verdict::hold;
  else
    out.verdict = Verdict::violated;
  return out;
}

StabilityCheck check_stability(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                               const LawVector& laws, double L, double u, double r1, double r2, double eps,
                               const SolverOptions& opts) {
  if (!(0.0 < r1 && r1 < r2)) throw std::invalid_argument("check_stability: need 0 < r1 < r2");
  if (x.size() != y.size()) throw std::invalid_argument("check_stability: x and y differ in length");
  StabilityCheck out;
  const double nx = x.norm(), ny = y.norm();
  if (!(nx > r1 && nx <= r2 && ny > r1 && ny <= r2)) return out;
  if (!((x - y).cwiseAbs().maxCoeff() < eps)) return out;

  const LcdResult D = log_rlcd(x, laws, L, u, opts);
  out.D = D.value;
  if (D.censored) return out;
  const double lp = std::log(u * D.value * nx / L);
  out.eps_allowance = lp > 0.0 ? 0.125 * (L * L) / (D.value * D.value) * lp : 0.0;
  out.eps_sq_var = eps * eps * total_variance(laws);
  if (out.eps_sq_var > out.eps_allowance) return out;

  LcdQuery up = LcdQuery::make({LcdKind::randomized_log, 2.0 * L, 2.0 * u * (r2 / r1)}, y, laws, opts);
  up.allow_large_u = true;
  LcdQuery down = LcdQuery::make({LcdKind::randomized_log, 0.5 * L, 0.5 * u * (r1 / r2)}, y, laws, opts);
  const LcdResult upper = lcd_infimum(up);
  const LcdResult lower = lcd_infimum(down);
  out.upper_side = upper.value;
  out.lower_side = lower.value;
  const double tol = slack(opts, D.value);
  const bool ok = !upper.censored && upper.value <= D.value + tol && lower.value >= D.value - tol;
  out.verdict = ok ? Verdict::hold : Verdict::violated;
  return out;
}

}  // namespace lcdlab
