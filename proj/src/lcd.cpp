#include "lcdlab/lcd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "lcdlab/geometry.hpp"

namespace lcdlab {

namespace {

constexpr double kStrictMargin = 1e-12;
constexpr std::size_t kRefreshEvery = 64;
constexpr std::size_t kMaxPieces = 200'000'000;

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

struct Component {
  double c;
  double p;
};

struct Problem {
  LcdVariant variant;
  double norm_v = 0.0;
  std::vector<Component> comps;
  std::vector<double> gauss_scale;  // |v_i| * sigma(Xbar_i)
};

Problem build_problem(const LcdQuery& q) {
  Problem P;
  P.variant = q.variant;
  P.norm_v = q.v.norm();
  const auto n = static_cast<std::size_t>(q.v.size());
  if (q.variant.randomized()) {
    if (q.laws.size() != n) throw std::invalid_argument("lcd: need one law per coordinate of v");
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = std::abs(q.v[static_cast<Eigen::Index>(i)]);
      if (vi == 0.0) continue;
      const auto& law = q.laws[i];
      if (!law.is_finite()) {
        P.gauss_scale.push_back(vi * law.sigma());
        continue;
      }
      for (const Atom& a : law.atoms())
        if (a.value != 0.0) P.comps.push_back({vi * std::abs(a.value), a.prob});
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = std::abs(q.v[static_cast<Eigen::Index>(i)]);
      if (vi != 0.0) P.comps.push_back({vi, 1.0});
    }
  }
  std::sort(P.comps.begin(), P.comps.end(), [](const Component& a, const Component& b) { return a.c < b.c; });
  std::vector<Component> merged;
  for (const auto& c : P.comps) {
    if (!merged.empty() && merged.back().c == c.c)
      merged.back().p += c.p;
    else
      merged.push_back(c);
  }
  P.comps = std::move(merged);
  return P;
}

double lhs_direct(const Problem& P, double theta) {
  double acc = 0.0;
  for (const auto& c : P.comps) acc += c.p * dist_sq_to_integer(theta * c.c);
  for (double s : P.gauss_scale) acc += gaussian_sq_dist_mean(theta * s);
  return acc;
}

double rhs_sq(const LcdVariant& var, double theta, double norm_v) {
  const double w = theta * norm_v;
  switch (var.kind) {
    case LcdKind::essential:
      return std::min(var.u * var.u * w * w, var.L * var.L);
    case LcdKind::randomized:
      return std::min(var.u * w * w, var.L * var.L);
    case LcdKind::logarithmic:
    case LcdKind::randomized_log:
      return var.L * var.L * log_plus(var.u * w / var.L);
  }
  return 0.0;
}

double gap(const Problem& P, double theta) { return lhs_direct(P, theta) - rhs_sq(P.variant, theta, P.norm_v); }

bool log_form(const LcdVariant& var) {
  return var.kind == LcdKind::logarithmic || var.kind == LcdKind::randomized_log;
}

// Below this theta the log variants have a zero threshold and cannot be violated; for the others it is
// the point where the threshold switches from quadratic growth to the constant L^2.
double rhs_break(const LcdVariant& var, double norm_v) {
  switch (var.kind) {
    case LcdKind::essential:
    case LcdKind::logarithmic:
    case LcdKind::randomized_log:
      return var.L / (var.u * norm_v);
    case LcdKind::randomized:
      return var.L / (norm_v * std::sqrt(var.u));
  }
  return 0.0;
}

double quad_coef(const LcdVariant& var, double norm_v) {
  return var.kind == LcdKind::essential ? var.u * var.u * norm_v * norm_v : var.u * norm_v * norm_v;
}

double stop_width(double tol, double theta) {
  return std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(theta));
}

LcdResult finish(const Problem& P, double theta) {
  return {theta, false, std::abs(gap(P, theta))};
}

LcdResult censored_at(const Problem& P, double theta_max) {
  return {theta_max, true, std::abs(gap(P, theta_max))};
}

// Walks the pieces on which every nearest integer k_j = round(theta c_j) is fixed. On a piece,
// with theta = a + s and r_j = a c_j - k_j,
//   lhs(a + s) = S2 + 2 S1 s + A s^2,   S1 = sum p c r,   S2 = sum p r^2,   A = sum p c^2.
// The threshold is a quadratic, a constant or L^2 log(kappa theta), so lhs - rhs is either a
// quadratic or convex on each piece and its first descent below -margin is located in closed form
// up to a final bisection.
LcdResult solve_pieces(const Problem& P, double start, double theta_max, double tol) {
  const auto& var = P.variant;
  const std::size_t m = P.comps.size();
  const double brk = rhs_break(var, P.norm_v);
  const double q = quad_coef(var, P.norm_v);
  const double L2 = var.L * var.L;
  const double kappa = var.u * P.norm_v / var.L;

  std::vector<double> k(m);
  double A = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    k[j] = std::nearbyint(start * P.comps[j].c);
    A += P.comps[j].p * P.comps[j].c * P.comps[j].c;
  }

  using Event = std::pair<double, std::size_t>;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  for (std::size_t j = 0; j < m; ++j) {
    double t = (k[j] + 0.5) / P.comps[j].c;
    while (t <= start) {
      k[j] += 1.0;
      t = (k[j] + 0.5) / P.comps[j].c;
    }
    events.emplace(t, j);
  }

  double S1 = 0.0, S2 = 0.0;
  auto refresh = [&](double a) {
    S1 = 0.0;
    S2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double r = a * P.comps[j].c - k[j];
      S1 += P.comps[j].p * P.comps[j].c * r;
      S2 += P.comps[j].p * r * r;
    }
  };

  double a = start;
  refresh(a);
  std::size_t pieces = 0;
  while (a < theta_max) {
    double b = theta_max;
    if (!events.empty()) b = std::min(b, events.top().first);
    if (!log_form(var) && brk > a) b = std::min(b, brk);

    if (b > a) {
      const bool const_rhs = !log_form(var) && a >= brk;
      // g(s) = lhs - rhs at a + s
      auto g = [&](double s) {
        const double lhs = S2 + 2.0 * S1 * s + A * s * s;
        const double th = a + s;
        if (log_form(var)) return lhs - L2 * log_plus(kappa * th);
        if (const_rhs) return lhs - L2;
        return lhs - q * th * th;
      };

      const double width = b - a;
      double s_min;
      if (log_form(var)) {
        // 2A th^2 + beta th - L^2 = 0 with beta = 2 S1 - 2 A a
        const double beta = 2.0 * S1 - 2.0 * A * a;
        const double disc = std::sqrt(beta * beta + 8.0 * A * L2);
        const double th = beta > 0.0 ? 2.0 * L2 / (beta + disc) : (disc - beta) / (4.0 * A);
        s_min = std::clamp(th - a, 0.0, width);
      } else {
        const double a2 = const_rhs ? A : A - q;
        const double a1 = 2.0 * (S1 - (const_rhs ? 0.0 : q * a));
        s_min = a2 > 0.0 ? std::clamp(-a1 / (2.0 * a2), 0.0, width) : width;
      }

      if (g(0.0) <= -kStrictMargin) return finish(P, a);
      if (g(s_min) <= -kStrictMargin) {
        refresh(a);
        double lo = 0.0, hi = s_min;
        if (g(hi) <= -kStrictMargin) {
          while (hi - lo > stop_width(tol, a + hi)) {
            const double mid = 0.5 * (lo + hi);
            if (g(mid) <= -kStrictMargin)
              hi = mid;
            else
              lo = mid;
          }
          return finish(P, a + hi);
        }
      }

      const double s = width;
      S2 += 2.0 * S1 * s + A * s * s;
      S1 += A * s;
    }

    a = b;
    while (!events.empty() && events.top().first <= a) {
      const std::size_t j = events.top().second;
      events.pop();
      const double r = a * P.comps[j].c - k[j];
      S1 -= P.comps[j].p * P.comps[j].c;
      S2 += P.comps[j].p * (1.0 - 2.0 * r);
      k[j] += 1.0;
      events.emplace((k[j] + 0.5) / P.comps[j].c, j);
    }
    if (++pieces % kRefreshEvery == 0) refresh(a);
    if (pieces > kMaxPieces) throw std::runtime_error("lcd: piece budget exhausted; lower theta_max");
  }
  return censored_at(P, theta_max);
}

// Grid scan with bisection, for laws with gaussian coordinates.
LcdResult solve_scan(const Problem& P, double start, double theta_max, double step, double tol) {
  if (gap(P, start) <= -kStrictMargin) return finish(P, start);
  double prev = start;
  while (prev < theta_max) {
    const double cur = std::min(theta_max, prev + step);
    if (gap(P, cur) <= -kStrictMargin) {
      double lo = prev, hi = cur;
      while (hi - lo > stop_width(tol, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (gap(P, mid) <= -kStrictMargin)
          hi = mid;
        else
          lo = mid;
      }
      return finish(P, hi);
    }
    prev = cur;
  }
  return censored_at(P, theta_max);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

const char* to_string(LcdKind kind) {
  switch (kind) {
    case LcdKind::essential:
      return "essential";
    case LcdKind::logarithmic:
      return "logarithmic";
    case LcdKind::randomized:
      return "randomized";
    case LcdKind::randomized_log:
      return "randomized-logarithmic";
  }
  return "?";
}

std::optional<LcdKind> parse_lcd_kind(std::string_view name) {
  if (name == "essential") return LcdKind::essential;
  if (name == "logarithmic" || name == "log") return LcdKind::logarithmic;
  if (name == "randomized" || name == "rlcd") return LcdKind::randomized;
  if (name == "randomized-logarithmic" || name == "randomized-log" || name == "logrlcd") return LcdKind::randomized_log;
  return std::nullopt;
}

void LcdVariant::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("lcd: L must be positive");
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("lcd: u must lie in (0, 1)");
}

LawVector symmetrized_laws(const RandomVectorModel& model) {
  LawVector out;
  out.reserve(model.size());
  for (const auto& e : model.entries()) out.emplace_back(e);
  return out;
}

double gaussian_sq_dist_mean(double tau) {
  tau = std::abs(tau);
  if (tau == 0.0) return 0.0;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  if (tau >= 0.25) {
    double sum = 1.0 / 12.0;
    for (int k = 1; k < 200; ++k) {
      const double kk = static_cast<double>(k) * k;
      const double term = std::exp(-2.0 * pi2 * kk * tau * tau) / (pi2 * kk);
      sum += (k % 2 == 1) ? -term : term;
      if (term < 1e-18) break;
    }
    return sum;
  }
  const double h = 0.5 / tau;
  double sum = tau * tau * (std::erf(h / std::numbers::sqrt2) - 2.0 * h * normal_pdf(h));
  for (int m = 1; (m - 0.5) / tau < 40.0; ++m) {
    const double za = (m - 0.5) / tau, zb = (m + 0.5) / tau;
    const double I0 = 0.5 * (std::erfc(za / std::numbers::sqrt2) - std::erfc(zb / std::numbers::sqrt2));
    const double I1 = tau * (normal_pdf(za) - normal_pdf(zb));
    const double I2 = tau * tau * (I0 + za * normal_pdf(za) - zb * normal_pdf(zb));
    sum += 2.0 * (I2 - 2.0 * m * I1 + static_cast<double>(m) * m * I0);
  }
  return sum;
}

double expected_sq_dist(double theta, const Eigen::Ref<const Eigen::VectorXd>& v,
                        std::span<const SymmetrizedDistribution> laws) {
  if (laws.size() != static_cast<std::size_t>(v.size()))
    throw std::invalid_argument("expected_sq_dist: need one law per coordinate");
  double acc = 0.0;
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const double c = theta * v[static_cast<Eigen::Index>(i)];
    if (!laws[i].is_finite()) {
      acc += gaussian_sq_dist_mean(c * laws[i].sigma());
      continue;
    }
    for (const Atom& a : laws[i].atoms()) acc += a.prob * dist_sq_to_integer(c * a.value);
  }
  return acc;
}

MonteCarloValue expected_sq_dist_mc(double theta, const Eigen::Ref<const Eigen::VectorXd>& v,
                                    std::span<const SymmetrizedDistribution> laws, std::size_t samples,
                                    const SeedSpec& seed) {
  if (laws.size() != static_cast<std::size_t>(v.size()))
    throw std::invalid_argument("expected_sq_dist_mc: need one law per coordinate");
  if (samples < 2) throw std::invalid_argument("expected_sq_dist_mc: need at least 2 samples");
  Stream rng = seed.substream(0);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    double x = 0.0;
    for (std::size_t i = 0; i < laws.size(); ++i)
      x += dist_sq_to_integer(theta * v[static_cast<Eigen::Index>(i)] * laws[i].sample(rng));
    const double delta = x - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

double threshold(const LcdVariant& variant, double theta, double norm_v) {
  if (theta < 0.0) throw std::invalid_argument("threshold: theta must be >= 0");
  const double w = theta * norm_v;
  switch (variant.kind) {
    case LcdKind::essential:
      return std::min(variant.u * w, variant.L);
    case LcdKind::logarithmic:
      return variant.L * std::sqrt(log_plus(variant.u * w / variant.L));
    case LcdKind::randomized:
      return std::min(variant.u * w * w, variant.L * variant.L);
    case LcdKind::randomized_log:
      return variant.L * variant.L * log_plus(variant.u * w / variant.L);
  }
  return 0.0;
}

LcdQuery LcdQuery::make(const LcdVariant& variant, Eigen::VectorXd v, LawVector laws, const SolverOptions& opts) {
  LcdQuery q;
  q.variant = variant;
  q.v = std::move(v);
  q.laws = std::move(laws);
  q.theta_max = opts.theta_max;
  q.grid_step = opts.grid_step;
  q.bisect_tol = opts.bisect_tol;
  return q;
}

double resolution_bound(const LcdQuery& query) {
  double bound = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < query.v.size(); ++i) {
    const double vi = std::abs(query.v[i]);
    if (vi == 0.0) continue;
    double extent = 1.0;
    if (query.variant.randomized()) extent = query.laws.at(static_cast<std::size_t>(i)).max_abs();
    if (extent == 0.0) continue;
    bound = std::min(bound, 1.0 / (4.0 * vi * extent));
  }
  return bound;
}

double lcd_gap(const LcdQuery& query, double theta) { return gap(build_problem(query), theta); }

LcdResult lcd_infimum(const LcdQuery& query) {
  if (query.allow_large_u) {
    if (!(query.variant.L > 0.0) || !(query.variant.u > 0.0)) throw std::invalid_argument("lcd: L and u must be positive");
  } else {
    query.variant.validate();
  }
  if (!(query.theta_max > 0.0) || !std::isfinite(query.theta_max))
    throw std::invalid_argument("lcd: theta_max must be positive and finite");
  if (query.v.size() == 0) throw std::invalid_argument("lcd: empty vector");

  const Problem P = build_problem(query);
  const double bound = resolution_bound(query);
  double step = query.grid_step;
  if (step < 0.0) throw std::invalid_argument("lcd: grid_step must be >= 0");
  if (step == 0.0) {
    step = std::min(bound, query.theta_max);
  } else {
    if (step > bound * (1.0 + 1e-12))
      throw ResolutionError("lcd: grid_step " + std::to_string(step) + " exceeds the period bound " +
                            std::to_string(bound));
    if (step >= query.theta_max) throw std::invalid_argument("lcd: grid_step must be below theta_max");
  }
  if (!(query.bisect_tol > 0.0) || query.bisect_tol >= step)
    throw std::invalid_argument("lcd: bisect_tol must be positive and below grid_step");

  if (P.comps.empty() && P.gauss_scale.empty()) return censored_at(P, query.theta_max);

  double start = 0.0;
  if (log_form(query.variant)) start = rhs_break(query.variant, P.norm_v);
  if (start >= query.theta_max) return censored_at(P, query.theta_max);

  if (P.gauss_scale.empty()) return solve_pieces(P, start, query.theta_max, query.bisect_tol);
  return solve_scan(P, start, query.theta_max, step, query.bisect_tol);
}

LcdResult log_rlcd(const Eigen::Ref<const Eigen::VectorXd>& v, const LawVector& laws, double L, double u,
                   const SolverOptions& opts) {
  return lcd_infimum(LcdQuery::make({LcdKind::randomized_log, L, u}, v, laws, opts));
}

}  // namespace lcdlab
