#include "lcdlab/nets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "lcdlab/lcd_multi.hpp"

namespace lcdlab {

WeightVector WeightVector::from(Eigen::VectorXd alpha) {
  WeightVector w;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0 && alpha[i] <= 1.0)) throw std::invalid_argument("weight vector entries must lie in (0, 1]");
    w.log_product += std::log(alpha[i]);
  }
  w.alpha = std::move(alpha);
  return w;
}

WeightVector WeightVector::ones(std::size_t n) { return from(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n))); }

bool WeightVector::in_omega(double kappa) const {
  return log_product >= -static_cast<double>(size()) * std::log(kappa) - 1e-12;
}

WeightVector WeightNet::element(std::size_t k) const {
  const auto& e = exponents.at(k);
  Eigen::VectorXd a(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) a[static_cast<Eigen::Index>(i)] = std::exp(-static_cast<double>(e[i]));
  return WeightVector::from(std::move(a));
}

std::optional<std::size_t> WeightNet::dominated_by(const Eigen::Ref<const Eigen::VectorXd>& beta) const {
  if (static_cast<std::size_t>(beta.size()) != n) throw std::invalid_argument("dominated_by: wrong length");
  // alpha <= beta  <=>  j_i >= -log beta_i; the smallest admissible exponents are ceilings.
  std::vector<int> need(n);
  int used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = beta[static_cast<Eigen::Index>(i)];
    if (!(b > 0.0)) return std::nullopt;
    need[i] = std::max(0, static_cast<int>(std::ceil(-std::log(std::min(b, 1.0)) - 1e-12)));
    used += need[i];
  }
  if (used > total_exponent) return std::nullopt;
  need[0] += total_exponent - used;
  auto it = std::lower_bound(exponents.begin(), exponents.end(), need);
  if (it == exponents.end() || *it != need) return std::nullopt;
  const auto idx = static_cast<std::size_t>(it - exponents.begin());
  const WeightVector a = element(idx);
  for (std::size_t i = 0; i < n; ++i)
    if (a.alpha[static_cast<Eigen::Index>(i)] > beta[static_cast<Eigen::Index>(i)] * (1.0 + 1e-12)) return std::nullopt;
  return idx;
}

WeightNet weight_net(double kappa, std::size_t n) {
  if (!(kappa > std::numbers::e)) throw std::invalid_argument("weight_net: kappa must exceed e");
  if (n == 0) throw std::invalid_argument("weight_net: n must be positive");
  WeightNet net;
  net.kappa = kappa;
  net.n = n;
  net.total_exponent = static_cast<int>(std::floor(static_cast<double>(n) * (1.0 + std::log(kappa)) + 1e-9));

  std::vector<int> cur(n, 0);
  std::function<void(std::size_t, int)> fill = [&](std::size_t i, int left) {
    if (i + 1 == n) {
      cur[i] = left;
      net.exponents.push_back(cur);
      return;
    }
    for (int j = 0; j <= left; ++j) {
      cur[i] = j;
      fill(i + 1, left - j);
    }
  };
  fill(0, net.total_exponent);
  std::sort(net.exponents.begin(), net.exponents.end());
  net.size_constant = std::pow(static_cast<double>(net.size()), 1.0 / static_cast<double>(n)) / std::log(kappa);
  return net;
}

Eigen::VectorXd lattice_steps(const WeightVector& alpha, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("lattice: epsilon must lie in (0, 1]");
  return alpha.alpha * (epsilon / std::sqrt(static_cast<double>(alpha.size())));
}

double annulus_census_estimate(const WeightVector& alpha, double epsilon) {
  const Eigen::VectorXd h = lattice_steps(alpha, epsilon);
  const double n = static_cast<double>(h.size());
  const double log_ball = 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
  const double shell = std::pow(1.5, n) - std::pow(0.5, n);
  return std::exp(log_ball - h.array().log().sum()) * shell;
}

AnnulusLattice enumerate_annulus_lattice(const WeightVector& alpha, double epsilon, std::size_t budget,
                                         std::size_t exact_limit) {
  const std::size_t n = alpha.size();
  if (n == 0) throw std::invalid_argument("lattice: empty weight vector");
  if (n > exact_limit) throw std::invalid_argument("lattice: exact enumeration is limited to n <= " + std::to_string(exact_limit));
  AnnulusLattice lat;
  lat.alpha = alpha;
  lat.epsilon = epsilon;
  lat.n = n;
  lat.mode = LatticeMode::exact;
  const Eigen::VectorXd h = lattice_steps(alpha, epsilon);
  lat.census_estimate = annulus_census_estimate(alpha, epsilon);

  constexpr double outer = 2.25 + 1e-12, inner = 0.25 - 1e-12;
  Eigen::VectorXd p(static_cast<Eigen::Index>(n));
  std::function<void(std::size_t, double)> walk = [&](std::size_t i, double norm_sq) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double room = outer - norm_sq;
    const auto reach = static_cast<long>(std::floor(std::sqrt(std::max(room, 0.0)) / h[ii] + 1e-9));
    for (long m = -reach; m <= reach; ++m) {
      p[ii] = static_cast<double>(m) * h[ii];
      const double s = norm_sq + p[ii] * p[ii];
      if (s > outer) continue;
      if (i + 1 < n) {
        walk(i + 1, s);
      } else if (s >= inner) {
        if (lat.points.size() >= budget)
          throw EnumerationBudgetError("lattice: enumeration budget exceeded, estimated " +
                                           std::to_string(lat.census_estimate) + " points",
                                       lat.census_estimate);
        lat.points.push_back(p);
      }
    }
  };
  walk(0, 0.0);
  return lat;
}

AnnulusLattice sample_annulus_lattice(const WeightVector& alpha, double epsilon, std::size_t count,
                                      const SeedSpec& seed) {
  const std::size_t n = alpha.size();
  AnnulusLattice lat;
  lat.alpha = alpha;
  lat.epsilon = epsilon;
  lat.n = n;
  lat.mode = LatticeMode::sampled;
  const Eigen::VectorXd h = lattice_steps(alpha, epsilon);
  lat.census_estimate = annulus_census_estimate(alpha, epsilon);
  const double dn = static_cast<double>(n);
  const double lo = std::pow(0.5, dn), hi = std::pow(1.5, dn);

  std::size_t attempts = 0;
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  while (lat.points.size() < count) {
    Stream rng = seed.substream(attempts++);
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.normal();
    if (g.norm() == 0.0) continue;
    const double r = std::pow(lo + (hi - lo) * rng.uniform(), 1.0 / dn);
    Eigen::VectorXd p = g.normalized() * r;
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = std::nearbyint(p[i] / h[i]) * h[i];
    const double norm = p.norm();
    if (norm >= 0.5 && norm <= 1.5) lat.points.push_back(std::move(p));
    if (attempts > 1000 && static_cast<double>(lat.points.size()) < 1e-6 * static_cast<double>(attempts))
      throw std::runtime_error("lattice: sampling acceptance below 1e-6");
  }
  lat.acceptance_rate = attempts ? static_cast<double>(lat.points.size()) / static_cast<double>(attempts) : 1.0;
  return lat;
}

RegularizedHsResult regularized_hs(const Eigen::VectorXd& column_norms_sq, double kappa) {
  if (!(kappa > std::numbers::e)) throw std::invalid_argument("regularized_hs: kappa must exceed e");
  const auto n = static_cast<std::size_t>(column_norms_sq.size());
  if (n == 0) throw std::invalid_argument("regularized_hs: no columns");
  std::vector<double> log_norm(n, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const double s = column_norms_sq[static_cast<Eigen::Index>(i)];
    if (!(s >= 0.0)) throw std::invalid_argument("regularized_hs: squared norms must be >= 0");
    if (s > 0.0) log_norm[i] = 0.5 * std::log(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return log_norm[a] > log_norm[b]; });

  const double budget = static_cast<double>(n) * std::log(kappa);
  RegularizedHsResult res;
  Eigen::VectorXd alpha = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  double log_lambda = std::numeric_limits<double>::infinity();
  double head = 0.0;
  std::size_t active = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double lk = log_norm[order[k - 1]];
    if (!std::isfinite(lk)) break;
    head += lk;
    const double cand = (head - budget) / static_cast<double>(k);
    const double next = k < n ? log_norm[order[k]] : -std::numeric_limits<double>::infinity();
    if (cand <= lk && cand >= next) {
      log_lambda = cand;
      active = k;
      break;
    }
  }
  if (active > 0) {
    for (std::size_t r = 0; r < active; ++r) {
      const std::size_t i = order[r];
      alpha[static_cast<Eigen::Index>(i)] = std::exp(log_lambda - log_norm[i]);
      res.active_set.push_back(i);
    }
    std::sort(res.active_set.begin(), res.active_set.end());
    res.lambda = std::exp(log_lambda);
  }
  res.alpha_star = WeightVector::from(alpha);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    res.value += alpha[ii] * alpha[ii] * column_norms_sq[ii];
  }

  double kkt = 0.0;
  if (active > 0) {
    kkt = std::abs(res.alpha_star.log_product + budget);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double norm = std::sqrt(column_norms_sq[ii]);
      if (alpha[ii] < 1.0)
        kkt = std::max(kkt, std::abs(alpha[ii] * norm - res.lambda));
      else
        kkt = std::max(kkt, std::max(0.0, norm - res.lambda));
    }
  }
  res.kkt_residual = kkt;
  return res;
}

RegularizedHsResult regularized_hs_matrix(const Eigen::MatrixXd& A, double kappa) {
  const Eigen::VectorXd norms_sq = A.colwise().squaredNorm().transpose();
  return regularized_hs(norms_sq, kappa);
}

namespace {

double round_ties_to_zero(double x, double h) {
  const double q = x / h;
  const double lo = std::floor(q);
  const double f = q - lo;
  double m;
  if (f < 0.5)
    m = lo;
  else if (f > 0.5)
    m = lo + 1.0;
  else
    m = std::abs(lo) < std::abs(lo + 1.0) ? lo : lo + 1.0;
  return m * h;
}

// Rounding each x_i to a neighbouring grid point, coordinates decided in turn so that the conditional
// expectation of |A(x - Y)|^2 under independent unbiased rounding of the rest never increases.
Eigen::VectorXd derandomized_round(const Eigen::MatrixXd& A, const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const Eigen::VectorXd& h) {
  Eigen::VectorXd y(x.size());
  Eigen::VectorXd r = Eigen::VectorXd::Zero(A.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double down = std::floor(x[i] / h[i]) * h[i];
    const double up = down + h[i];
    const Eigen::VectorXd r_down = r + A.col(i) * (x[i] - down);
    const Eigen::VectorXd r_up = r + A.col(i) * (x[i] - up);
    if (r_down.squaredNorm() <= r_up.squaredNorm()) {
      y[i] = down;
      r = r_down;
    } else {
      y[i] = up;
      r = r_up;
    }
  }
  return y;
}

}  // namespace

NetApproximation approximate_on_net(const Eigen::MatrixXd& A, const Eigen::Ref<const Eigen::VectorXd>& x, double kappa,
                                    double epsilon) {
  if (A.cols() != x.size()) throw std::invalid_argument("approximate_on_net: A has the wrong number of columns");
  if (std::abs(x.norm() - 1.0) > 1e-9) throw NormalizationError("approximate_on_net: x must be a unit vector");
  const double n = static_cast<double>(x.size());
  const RegularizedHsResult hs = regularized_hs_matrix(A, kappa);
  NetApproximation out;
  out.alpha = hs.alpha_star;
  out.B = hs.value;
  const Eigen::VectorXd h = lattice_steps(out.alpha, epsilon);
  out.linf_bound = epsilon / std::sqrt(n);
  out.matrix_bound = epsilon * std::sqrt(out.B) / std::sqrt(n);

  out.y.resize(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.y[i] = round_ties_to_zero(x[i], h[i]);
  out.matrix_cert = (A * (x - out.y)).norm();
  if (out.matrix_cert > out.matrix_bound) {
    out.y = derandomized_round(A, x, h);
    out.matrix_cert = (A * (x - out.y)).norm();
    out.derandomized = true;
  }
  out.linf = (x - out.y).cwiseAbs().maxCoeff();
  const double ny = out.y.norm();
  out.annulus_miss = ny < 0.5 || ny > 1.5;
  return out;
}

const char* to_string(LevelSetClass c) {
  switch (c) {
    case LevelSetClass::in_S:
      return "in_S";
    case LevelSetClass::in_S_tilde:
      return "in_S_tilde";
    case LevelSetClass::neither:
      return "neither";
    case LevelSetClass::annulus_miss:
      return "annulus-miss";
  }
  return "?";
}

LevelSetReport level_set_classify(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<LawVector>& column_laws,
                                  const LevelSetQuery& query, double theta_max) {
  if (!(query.D > 0.0)) throw std::invalid_argument("level_set_classify: D must be positive");
  if (query.D > 0.5 * theta_max) throw std::invalid_argument("level_set_classify: need D <= theta_max / 2");
  if (!(query.u > 0.0 && 6.0 * query.u < 1.0)) throw std::invalid_argument("level_set_classify: need 0 < u < 1/6");
  LevelSetReport rep;
  const double norm = x.norm();
  if (norm < query.r_low || norm > query.r_high) {
    rep.cls = LevelSetClass::annulus_miss;
    return rep;
  }
  SolverOptions opts;
  opts.theta_max = theta_max;
  const ColumnsLcd m = log_rlcd_columns(column_laws, x, query.L, query.u, opts);
  rep.m = m.result.value;
  rep.m_censored = m.result.censored;
  rep.in_S = !rep.m_censored && rep.m >= query.D && rep.m <= 2.0 * query.D;

  const ColumnsLcd wide = log_rlcd_columns(column_laws, x, 2.0 * query.L, 6.0 * query.u, opts);
  const ColumnsLcd narrow = log_rlcd_columns(column_laws, x, 0.5 * query.L, query.u / 6.0, opts);
  rep.wide = wide.result.value;
  rep.narrow = narrow.result.value;
  rep.in_S_tilde = !wide.result.censored && rep.wide <= 2.0 * query.D && rep.narrow >= query.D;

  if (rep.in_S)
    rep.cls = LevelSetClass::in_S;
  else if (rep.in_S_tilde)
    rep.cls = LevelSetClass::in_S_tilde;
  else
    rep.cls = LevelSetClass::neither;
  return rep;
}

bool in_structured_lattice(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::VectorXd>& steps,
                           const SphereParams& params) {
  const double n = static_cast<double>(p.size());
  if (p.norm() > 1.5 + 1e-12) return false;
  const double cut = params.rho / (2.0 * std::sqrt(n));
  std::size_t spread = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double q = p[i] / steps[i];
    if (std::abs(q - std::nearbyint(q)) > 1e-9) return false;
    if (std::abs(p[i]) >= cut) ++spread;
  }
  return static_cast<double>(spread) >= params.delta * n;
}

StructuredSample sample_structured_lattice(const Eigen::Ref<const Eigen::VectorXd>& lambdas, const SphereParams& params,
                                           const SeedSpec& seed, std::size_t count) {
  params.validate();
  const auto n = lambdas.size();
  if (n == 0) throw std::invalid_argument("structured lattice: empty lambda vector");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(lambdas[i] > 0.0 && lambdas[i] <= 0.01))
      throw std::invalid_argument("structured lattice: need 0 < lambda_i <= 0.01");

  StructuredSample out;
  out.steps = lambdas / std::sqrt(static_cast<double>(n));
  std::vector<std::uint64_t> span(static_cast<std::size_t>(n));
  std::vector<long> reach(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    reach[static_cast<std::size_t>(i)] = static_cast<long>(std::floor(1.5 / out.steps[i] + 1e-9));
    span[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(2 * reach[static_cast<std::size_t>(i)] + 1);
  }
  const double cut = params.rho / (2.0 * std::sqrt(static_cast<double>(n)));
  const double need = params.delta * static_cast<double>(n);

  Eigen::VectorXd p(n);
  Stream rng = seed.substream(0);
  while (out.points.size() < count) {
    ++out.attempts;
    double norm_sq = 0.0;
    std::size_t spread = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<long>(rng.below(span[static_cast<std::size_t>(i)])) - reach[static_cast<std::size_t>(i)];
      p[i] = static_cast<double>(k) * out.steps[i];
      norm_sq += p[i] * p[i];
      if (std::abs(p[i]) >= cut) ++spread;
    }
    if (norm_sq <= 2.25 && static_cast<double>(spread) >= need) out.points.push_back(p);
    if (out.attempts >= 1'000'000 && static_cast<double>(out.points.size()) < 1e-6 * static_cast<double>(out.attempts))
      throw std::runtime_error("structured lattice: acceptance rate below 1e-6");
  }
  out.acceptance_rate = static_cast<double>(out.points.size()) / static_cast<double>(out.attempts);
  return out;
}

}  // namespace lcdlab
