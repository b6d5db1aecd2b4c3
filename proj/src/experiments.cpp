#include "lcdlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "lcdlab/geometry.hpp"
#include "lcdlab/parallel.hpp"

namespace lcdlab {

using nlohmann::json;

ExperimentConstants ExperimentConstants::from_json(const json& j) {
  ExperimentConstants c;
  try {
    c.b = j.value("b", c.b);
    c.K = j.value("K", c.K);
    c.delta = j.value("delta", c.delta);
    c.rho = j.value("rho", c.rho);
    c.u = j.value("u", c.u);
    c.lambda = j.value("lambda", c.lambda);
    c.c1 = j.value("c1", c.c1);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("constants: ") + e.what());
  }
  if (!(c.b > 0.0 && c.b < 1.0)) throw ConfigError("constants: b must lie in (0, 1)");
  if (!(c.K >= 1.0)) throw ConfigError("constants: K must be >= 1");
  if (!(c.delta > 0.0 && c.delta < 1.0) || !(c.rho > 0.0 && c.rho < 1.0))
    throw ConfigError("constants: delta and rho must lie in (0, 1)");
  if (!(c.u > 0.0 && c.u < 1.0)) throw ConfigError("constants: u must lie in (0, 1)");
  if (!(c.lambda > 0.0) || !(c.c1 > 0.0)) throw ConfigError("constants: lambda and c1 must be positive");
  return c;
}

json ExperimentConstants::to_json() const {
  return {{"b", b}, {"K", K}, {"delta", delta}, {"rho", rho}, {"u", u}, {"lambda", lambda}, {"c1", c1}};
}

DistanceExperimentConfig DistanceExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"n",       "d",       "t_grid",    "trials", "seed",
                                           "x_model", "a_model", "constants", "threads"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
  DistanceExperimentConfig cfg;
  try {
    if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
    if (j.contains("d")) {
      const auto& d = j.at("d");
      cfg.d_list = d.is_array() ? d.get<std::vector<std::size_t>>() : std::vector<std::size_t>{d.get<std::size_t>()};
    }
    if (j.contains("t_grid")) cfg.t_grid = j.at("t_grid").get<std::vector<double>>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
    if (j.contains("seed")) cfg.seed = SeedSpec{j.at("seed").get<std::uint64_t>()};
    if (j.contains("x_model")) cfg.x_model = VectorModelSpec::parse(j.at("x_model"));
    if (j.contains("a_model")) cfg.a_model = MatrixModelSpec::parse(j.at("a_model"));
    if (j.contains("constants")) cfg.constants = ExperimentConstants::from_json(j.at("constants"));
    if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json DistanceExperimentConfig::to_json() const {
  return {{"n", n},
          {"d", d_list},
          {"t_grid", t_grid},
          {"trials", trials},
          {"seed", seed.master_seed},
          {"x_model", x_model.to_json()},
          {"a_model", a_model.to_json()},
          {"constants", constants.to_json()},
          {"threads", threads}};
}

void DistanceExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("config: n must be >= 2");
  if (d_list.empty()) throw ConfigError("config: d list is empty");
  for (std::size_t d : d_list)
    if (d < 1 || d >= n) throw ConfigError("config: every d must satisfy 1 <= d < n");
  if (t_grid.empty()) throw ConfigError("config: t grid is empty");
  for (double t : t_grid)
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("config: t values must be finite and >= 0");
  if (trials == 0) throw ConfigError("config: trials must be positive");
}

std::string hypothesis_flags(const DistanceExperimentConfig& cfg, std::size_t d) {
  const std::size_t n = cfg.n;
  const RandomVectorModel X = cfg.x_model.build(n);
  const RandomMatrixModel A = cfg.a_model.build(n, n - d);
  std::vector<std::string> flags;

  double level = 0.0;
  for (const auto& e : X.entries()) level = std::max(level, anticoncentration_level(e));
  for (std::size_t j = 0; j < A.cols(); ++j)
    for (std::size_t i = 0; i < A.rows(); ++i) {
      level = std::max(level, anticoncentration_level(A.law(i, j)));
      if (A.rule() == Broadcast::single || A.rule() == Broadcast::per_column) break;
    }
  if (level > cfg.constants.b) flags.emplace_back("anticoncentration>b");

  const double dn = static_cast<double>(n);
  if (X.second_moment() > cfg.constants.c1 * dn * dn) flags.emplace_back("second-moment>c1*n^2");
  if (A.expected_hs_sq() > cfg.constants.K * static_cast<double>(n - d) * dn) flags.emplace_back("hs-budget>K*N*n");
  if (static_cast<double>(d) > cfg.constants.lambda * dn / std::log(dn)) flags.emplace_back("out-of-theorem-range");

  if (flags.empty()) return "ok";
  std::string out = flags.front();
  for (std::size_t k = 1; k < flags.size(); ++k) out += "|" + flags[k];
  return out;
}

std::vector<double> sample_distances(const DistanceExperimentConfig& cfg, std::size_t d) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const RandomVectorModel X = cfg.x_model.build(n);
  const RandomMatrixModel A = cfg.a_model.build(n, n - d);
  const SeedSpec family = cfg.seed.child(d);
  const SeedSpec a_seed = family.child(1), x_seed = family.child(2);

  std::vector<double> dist(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t begin, std::size_t end) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - d));
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t k = begin; k < end; ++k) {
      Stream ra = a_seed.substream(k), rx = x_seed.substream(k);
      sample_matrix_into(A, ra, a);
      sample_vector_into(X, rx, x);
      dist[k] = ColumnSpan(a).distance(x);
    }
  });
  return dist;
}

std::vector<ExperimentRecord> run_distance_experiment(const DistanceExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ExperimentRecord> out;
  for (std::size_t d : cfg.d_list) {
    const std::string flags = hypothesis_flags(cfg, d);
    const std::vector<double> dist = sample_distances(cfg, d);
    const double sd = std::sqrt(static_cast<double>(d));
    for (double t : cfg.t_grid) {
      ExperimentRecord r;
      r.n = cfg.n;
      r.d = d;
      r.t = t;
      r.trials = cfg.trials;
      const double radius = t * sd;
      r.hits = static_cast<std::uint64_t>(std::count_if(dist.begin(), dist.end(), [&](double v) { return v <= radius; }));
      r.phat = static_cast<double>(r.hits) / static_cast<double>(r.trials);
      r.stderr = std::sqrt(r.phat * (1.0 - r.phat) / static_cast<double>(r.trials));
      r.seed = cfg.seed.master_seed;
      r.flags = flags;
      out.push_back(std::move(r));
    }
  }
  return out;
}

FitResult fit_power_law(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw FitError("fit_power_law: no records");
  const std::size_t n = records.front().n, d = records.front().d;
  std::vector<double> xs, ys;
  FitResult fit;
  fit.t_min = std::numeric_limits<double>::infinity();
  fit.t_max = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (r.n != n || r.d != d) throw FitError("fit_power_law: records mix (n, d) groups");
    if (!(r.t > 0.0) || r.trials == 0) continue;
    if (!(r.phat > 10.0 / static_cast<double>(r.trials))) continue;
    xs.push_back(std::log(r.t));
    ys.push_back(std::log(r.phat));
    fit.t_min = std::min(fit.t_min, r.t);
    fit.t_max = std::max(fit.t_max, r.t);
  }
  if (xs.size() < 4) throw FitError("fit_power_law: fewer than 4 rows above the Monte Carlo floor");
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx == 0.0) throw FitError("fit_power_law: all usable rows share one t");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.C_fit = std::exp(fit.intercept / static_cast<double>(d));
  fit.rows_used = xs.size();
  return fit;
}

}  // namespace lcdlab
