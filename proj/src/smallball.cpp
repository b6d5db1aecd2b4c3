#include "lcdlab/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lcdlab {

namespace {

constexpr double kRel = 1e-9;

double mass_within(const PointLaw& law, const Eigen::VectorXd& c, double t) {
  const double r2 = t * t * (1.0 + kRel) + 1e-300;
  double m = 0.0;
  for (std::size_t k = 0; k < law.points.size(); ++k)
    if ((law.points[k] - c).squaredNorm() <= r2) m += law.probs[k];
  return m;
}

void offer(const PointLaw& law, double t, const Eigen::VectorXd& c, ConcentrationEstimate& best) {
  const double m = mass_within(law, c, t);
  if (m > best.value) {
    best.value = m;
    best.center = c;
  }
}

// Points at distance exactly t from both a and b in the plane.
void pair_centers_2d(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double t, std::vector<Eigen::VectorXd>& out) {
  const Eigen::Vector2d mid = 0.5 * (a + b);
  const Eigen::Vector2d diff = b - a;
  const double half = 0.5 * diff.norm();
  if (half == 0.0 || half > t * (1.0 + kRel)) return;
  const double h = std::sqrt(std::max(0.0, t * t - half * half));
  const Eigen::Vector2d normal(-diff[1] / diff.norm(), diff[0] / diff.norm());
  out.emplace_back(mid + h * normal);
  out.emplace_back(mid - h * normal);
}

void triple_centers_3d(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c, double t,
                       std::vector<Eigen::VectorXd>& out) {
  const Eigen::Vector3d ab = b - a, ac = c - a;
  const Eigen::Vector3d n = ab.cross(ac);
  const double n2 = n.squaredNorm();
  if (n2 < 1e-24) return;
  const Eigen::Vector3d cc = a + (ac.squaredNorm() * n.cross(ab) + ab.squaredNorm() * ac.cross(n)) / (2.0 * n2);
  const double R2 = (cc - a).squaredNorm();
  if (R2 > t * t * (1.0 + kRel)) return;
  const double h = std::sqrt(std::max(0.0, t * t - R2));
  const Eigen::Vector3d unit = n / std::sqrt(n2);
  out.emplace_back(Eigen::VectorXd(cc + h * unit));
  out.emplace_back(Eigen::VectorXd(cc - h * unit));
}

PointLaw merged(PointLaw law) {
  std::vector<std::size_t> order(law.points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::lexicographical_compare(law.points[i].data(), law.points[i].data() + law.points[i].size(),
                                        law.points[j].data(), law.points[j].data() + law.points[j].size());
  });
  PointLaw out;
  for (std::size_t i : order) {
    if (law.probs[i] == 0.0) continue;
    if (!out.points.empty() && out.points.back() == law.points[i])
      out.probs.back() += law.probs[i];
    else {
      out.points.push_back(law.points[i]);
      out.probs.push_back(law.probs[i]);
    }
  }
  return out;
}

}  // namespace

PointLaw PointLaw::from(const EntryDistribution& law) {
  if (!law.is_finite()) throw std::invalid_argument("PointLaw: law must be finite");
  PointLaw out;
  for (const Atom& a : law.atoms()) {
    out.points.push_back(Eigen::VectorXd::Constant(1, a.value));
    out.probs.push_back(a.prob);
  }
  return out;
}

PointLaw PointLaw::product(const std::vector<EntryDistribution>& coords) {
  if (coords.empty()) throw std::invalid_argument("PointLaw: need at least one coordinate");
  PointLaw out;
  out.points.emplace_back(0);
  out.probs.push_back(1.0);
  for (const auto& c : coords) {
    if (!c.is_finite()) throw std::invalid_argument("PointLaw: coordinates must be finite laws");
    PointLaw next;
    for (std::size_t k = 0; k < out.points.size(); ++k) {
      for (const Atom& a : c.atoms()) {
        Eigen::VectorXd p(out.points[k].size() + 1);
        p << out.points[k], a.value;
        next.points.push_back(std::move(p));
        next.probs.push_back(out.probs[k] * a.prob);
      }
    }
    if (next.points.size() > kMaxSymmetrizedAtoms) throw BudgetError("PointLaw: product exceeds the atom budget");
    out = std::move(next);
  }
  return out;
}

PointLaw PointLaw::transformed(const Eigen::MatrixXd& Q) const {
  PointLaw out;
  out.probs = probs;
  for (const auto& p : points) out.points.push_back(Q * p);
  return out;
}

ConcentrationEstimate levy_concentration(const PointLaw& raw, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("levy_concentration: t must be >= 0");
  if (raw.points.empty() || raw.points.size() != raw.probs.size())
    throw std::invalid_argument("levy_concentration: malformed law");
  const PointLaw law = merged(raw);
  const std::size_t d = law.dim();
  ConcentrationEstimate best;
  best.mode = ConcentrationMode::exact_discrete;

  if (d == 1) {
    // Closed window [x_lo, x_lo + 2t] anchored at each atom.
    std::size_t hi = 0;
    double mass = 0.0;
    for (std::size_t lo = 0; lo < law.points.size(); ++lo) {
      const double right = law.points[lo][0] + 2.0 * t;
      const double slack = kRel * std::max({1.0, std::abs(right), t});
      while (hi < law.points.size() && law.points[hi][0] <= right + slack) mass += law.probs[hi++];
      if (mass > best.value) {
        best.value = mass;
        best.center = Eigen::VectorXd::Constant(1, law.points[lo][0] + t);
      }
      mass -= law.probs[lo];
    }
  } else if (d == 2 || d == 3) {
    std::vector<Eigen::VectorXd> cand(law.points.begin(), law.points.end());
    const std::size_t m = law.points.size();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (d == 2) {
          pair_centers_2d(law.points[i], law.points[j], t, cand);
        } else {
          const Eigen::Vector3d a = law.points[i], b = law.points[j];
          const double half = 0.5 * (b - a).norm();
          if (half > t * (1.0 + kRel)) continue;
          const Eigen::Vector3d axis = (b - a).normalized();
          Eigen::Vector3d perp = axis.unitOrthogonal();
          cand.emplace_back(Eigen::VectorXd(0.5 * (a + b) + std::sqrt(std::max(0.0, t * t - half * half)) * perp));
          for (std::size_t k = j + 1; k < m; ++k) triple_centers_3d(a, b, law.points[k], t, cand);
        }
      }
    }
    for (const auto& c : cand) offer(law, t, c, best);
  } else {
    throw std::invalid_argument("levy_concentration: exact mode supports dimension <= 3");
  }
  best.value = std::min(best.value, 1.0);
  return best;
}

ConcentrationEstimate levy_concentration(const EntryDistribution& law, double t) {
  return levy_concentration(PointLaw::from(law), t);
}

ConcentrationEstimate levy_concentration_mc(const VectorSampler& sampler, double t, std::size_t trials,
                                            const SeedSpec& seed) {
  if (trials < 1000) throw std::invalid_argument("levy_concentration_mc: needs at least 1000 trials");
  if (!(t >= 0.0)) throw std::invalid_argument("levy_concentration_mc: t must be >= 0");
  const std::size_t half = trials / 2;
  std::vector<Eigen::VectorXd> first, second;
  first.reserve(half);
  second.reserve(trials - half);
  for (std::size_t k = 0; k < trials; ++k) {
    Stream rng = seed.substream(k);
    (k < half ? first : second).push_back(sampler(rng));
  }
  const std::size_t candidates = std::min<std::size_t>(half, 512);
  const double t2 = t * t;
  std::size_t best_hits = 0, best_idx = 0;
  for (std::size_t c = 0; c < candidates; ++c) {
    std::size_t hits = 0;
    for (const auto& z : first)
      if ((z - first[c]).squaredNorm() <= t2) ++hits;
    if (hits > best_hits) {
      best_hits = hits;
      best_idx = c;
    }
  }
  std::size_t hits = 0;
  for (const auto& z : second)
    if ((z - first[best_idx]).squaredNorm() <= t2) ++hits;
  ConcentrationEstimate est;
  est.mode = ConcentrationMode::monte_carlo;
  const double m = static_cast<double>(second.size());
  est.value = static_cast<double>(hits) / m;
  est.stderr = std::sqrt(est.value * (1.0 - est.value) / m);
  est.center = first[best_idx];
  return est;
}

CharFnModulus charfn_modulus_of(const PointLaw& law) {
  return [law](const Eigen::VectorXd& theta) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < law.points.size(); ++k)
      acc += law.probs[k] * std::polar(1.0, 2.0 * std::numbers::pi * theta.dot(law.points[k]));
    return std::abs(acc);
  };
}

CharFnModulus product_charfn_modulus(const std::vector<EntryDistribution>& coords) {
  return [coords](const Eigen::VectorXd& theta) {
    double acc = 1.0;
    for (std::size_t j = 0; j < coords.size(); ++j)
      acc *= coords[j].charfn_modulus(2.0 * std::numbers::pi * theta[static_cast<Eigen::Index>(j)]);
    return acc;
  };
}

namespace {

// Composite adaptive Gauss-Kronrod: the interval is cut into equal panels, each refined on its own.
template <unsigned Points, class F>
double panel_integrate(F&& f, double a, double b, int panels, unsigned depth, double tol, double& err) {
  double v = 0.0;
  for (int p = 0; p < panels; ++p) {
    double e = 0.0;
    v += boost::math::quadrature::gauss_kronrod<double, Points>::integrate(
        f, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, depth, tol, &e);
    err += e;
  }
  return v;
}

}  // namespace

double esseen_integral(const CharFnModulus& phi, int d) {
  const double tol = d == 1 ? 1e-6 : 1e-4;
  const double R = std::sqrt(static_cast<double>(d));
  const double two_pi = 2.0 * std::numbers::pi;
  double err = 0.0;
  double v = 0.0;

  if (d == 1) {
    Eigen::VectorXd th(1);
    v = panel_integrate<31>(
        [&](double x) {
          th[0] = x;
          return phi(th);
        },
        -R, R, 16, 18, 1e-12, err);
  } else if (d == 2) {
    Eigen::VectorXd th(2);
    double inner_err = 0.0;
    auto ring = [&](double r) {
      double e = 0.0;
      const double w = panel_integrate<15>(
          [&](double a) {
            th << r * std::cos(a), r * std::sin(a);
            return phi(th);
          },
          0.0, two_pi, 8, 16, 1e-9, e);
      inner_err = std::max(inner_err, e * r);
      return r * w;
    };
    v = panel_integrate<15>(ring, 0.0, R, 16, 8, 1e-5, err);
    err += inner_err * R;
  } else if (d == 3) {
    Eigen::VectorXd th(3);
    double inner_err = 0.0;
    auto shell = [&](double r) {
      double e_outer = 0.0;
      const double w = panel_integrate<15>(
          [&](double pol) {
            double e_inner = 0.0;
            const double inner = panel_integrate<15>(
                [&](double az) {
                  th << r * std::sin(pol) * std::cos(az), r * std::sin(pol) * std::sin(az), r * std::cos(pol);
                  return phi(th);
                },
                0.0, two_pi, 8, 16, 1e-8, e_inner);
            inner_err = std::max(inner_err, e_inner * r * r * std::sin(pol) * std::numbers::pi);
            return std::sin(pol) * inner;
          },
          0.0, std::numbers::pi, 4, 16, 1e-8, e_outer);
      inner_err = std::max(inner_err, e_outer * r * r);
      return r * r * w;
    };
    v = panel_integrate<15>(shell, 0.0, R, 8, 16, 1e-8, err);
    err += inner_err * R;
  } else {
    throw std::invalid_argument("esseen_integral: d must be 1, 2 or 3");
  }
  if (!(err <= tol)) throw QuadratureError("esseen_integral: quadrature did not converge");
  return v;
}

double esseen_bound(const CharFnModulus& phi, int d, double C1) {
  return std::pow(C1, d) * esseen_integral(phi, d);
}

namespace {

void check_sbp_hypotheses(double D, double L, int d) {
  if (d < 1) throw std::invalid_argument("small-ball bound: d must be >= 1");
  if (!(D > 0.0)) throw std::invalid_argument("small-ball bound: D must be positive");
  if (2.0 * L * L < d + 2.0) throw HypothesisError("small-ball bound: requires 2 L^2 >= d + 2");
}

}  // namespace

double sbp_formula_bound(const SbpBoundInputs& in) {
  check_sbp_hypotheses(in.D, in.L, in.d);
  if (!(in.det_root > 0.0)) throw std::invalid_argument("small-ball bound: det_root must be positive");
  const double sd = std::sqrt(static_cast<double>(in.d));
  const double t0 = sd / in.D;
  return std::pow(in.C * in.L / (sd * in.u), in.d) * std::pow(std::max(in.t, t0), in.d) / in.det_root;
}

double projection_sbp_bound(double D, double L, double u, int d, double t, double C) {
  check_sbp_hypotheses(D, L, d);
  if (L < 1.0) throw HypothesisError("projection bound: requires L >= 1");
  const double sd = std::sqrt(static_cast<double>(d));
  const double t0 = sd / D;
  return std::pow(C * L / u, d) * std::pow(std::max(t, t0) / sd, d);
}

}  // namespace lcdlab
