#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcdlab/experiments.hpp"
#include "lcdlab/lcd.hpp"
#include "lcdlab/model_config.hpp"
#include "lcdlab/nets.hpp"
#include "lcdlab/probes.hpp"
#include "lcdlab/properties.hpp"
#include "lcdlab/records.hpp"

namespace lcdlab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Common {
  std::optional<std::size_t> n;
  std::vector<std::size_t> d;
  std::vector<double> t_grid;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--n", c.n, "dimension");
  app->add_option("--d", c.d, "co-dimensions, comma separated")->delimiter(',');
  app->add_option("--t-grid", c.t_grid, "radii, comma separated")->delimiter(',');
  app->add_option("--trials", c.trials, "Monte Carlo trials");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--config", c.config, "JSON configuration file");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--format", c.format, "csv or csv+plot")->check(CLI::IsMember({"csv", "csv+plot"}));
  app->add_option("--threads", c.threads, "worker threads, 0 for all cores");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  try {
    json j = json::parse(is, nullptr, true, true);
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: field '") + key + "': " + e.what());
  }
}

SphereParams sphere_params(const json& j) {
  SphereParams p;
  p.delta = get_or(j, "delta", p.delta);
  p.rho = get_or(j, "rho", p.rho);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

void write_json(const json& j, const Common& c, const std::string& name, std::ostream& out) {
  out << j.dump(2) << '\n';
  if (c.out.empty()) return;
  std::error_code ec;
  fs::create_directories(c.out, ec);
  const fs::path path = fs::path(c.out) / name;
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

int cmd_lcd(const Common& c, const std::string& kind_name, const std::vector<double>& v_flag,
            std::optional<double> L_flag, std::optional<double> u_flag, std::optional<double> theta_flag,
            const std::string& law_flag, std::ostream& out) {
  const json cfg = load_config(c.config);
  LcdVariant variant;
  const std::string kind_text = kind_name.empty() ? get_or<std::string>(cfg, "kind", "randomized-logarithmic") : kind_name;
  const auto kind = parse_lcd_kind(kind_text);
  if (!kind) throw ConfigError("unknown LCD kind '" + kind_text + "'");
  variant.kind = *kind;
  variant.L = L_flag.value_or(get_or(cfg, "L", variant.L));
  variant.u = u_flag.value_or(get_or(cfg, "u", variant.u));

  std::vector<double> v = v_flag.empty() ? get_or(cfg, "v", std::vector<double>{}) : v_flag;
  if (v.empty()) {
    const std::size_t n = c.n.value_or(get_or<std::size_t>(cfg, "n", 1));
    if (n == 0) throw ConfigError("n must be positive");
    v.assign(n, 0.0);
    v[0] = 1.0;
  }
  const Eigen::VectorXd vec = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));

  json law_json = cfg.contains("x_model") ? cfg.at("x_model") : json{{"law", {{"kind", "rademacher"}}}};
  if (!law_flag.empty()) {
    try {
      law_json = json{{"law", json::parse(law_flag)}};
    } catch (const json::parse_error&) {
      law_json = json{{"law", {{"kind", law_flag}}}};
    }
  }
  const LawVector laws = symmetrized_laws(VectorModelSpec::parse(law_json).build(v.size()));

  SolverOptions opts;
  opts.theta_max = theta_flag.value_or(get_or(cfg, "theta_max", opts.theta_max));
  opts.bisect_tol = get_or(cfg, "bisect_tol", opts.bisect_tol);
  opts.grid_step = get_or(cfg, "grid_step", opts.grid_step);
  const LcdResult res = lcd_infimum(LcdQuery::make(variant, vec, laws, opts));

  std::ostringstream line;
  line.precision(17);
  line << "kind=" << to_string(variant.kind) << " L=" << variant.L << " u=" << variant.u << " n=" << v.size()
       << " theta_max=" << opts.theta_max << " value=" << res.value << " censored=" << (res.censored ? 1 : 0)
       << " residual=" << res.crossing_residual;
  out << line.str() << '\n';
  if (!c.out.empty()) {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    std::ofstream os(fs::path(c.out) / "lcd.txt", std::ios::app);
    if (!os) throw ConfigError("cannot write to " + c.out);
    os << line.str() << '\n';
  }
  return kExitOk;
}

int cmd_net_audit(const Common& c, std::ostream& out) {
  const json cfg = load_config(c.config);
  const std::size_t trials = c.trials.value_or(get_or<std::size_t>(cfg, "trials", 1000));
  const std::size_t n = c.n.value_or(get_or<std::size_t>(cfg, "n", 16));
  const SeedSpec seed{c.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1))};
  if (n == 0 || trials == 0) throw ConfigError("n and trials must be positive");

  SuiteReport rep;
  rep.seed = seed.master_seed;
  rep.results.push_back(prop_weight_net_domination(seed.child(1), std::max<std::size_t>(1, trials / 18)));
  rep.results.push_back(prop_regularized_hs_bounds(seed.child(2), trials));
  rep.results.push_back(prop_net_certificates(seed.child(3), trials, n));
  for (const auto& r : rep.results)
    out << (r.ok() ? "PASS " : "FAIL ") << r.name << " cases=" << r.cases << " violated=" << r.violated
        << " worst_margin=" << r.worst_margin << (r.note.empty() ? "" : " (" + r.note + ")") << '\n';
  if (!c.out.empty()) {
    std::ostringstream sink;
    write_json(rep.to_json(), c, "net_audit.json", sink);
  }
  return rep.ok() ? kExitOk : kExitViolation;
}

int cmd_dist(const Common& c, std::ostream& out, std::ostream& err) {
  json cfg_json = load_config(c.config);
  if (c.n) cfg_json["n"] = *c.n;
  if (!c.d.empty()) cfg_json["d"] = c.d;
  if (!c.t_grid.empty()) cfg_json["t_grid"] = c.t_grid;
  if (c.trials) cfg_json["trials"] = *c.trials;
  if (c.seed) cfg_json["seed"] = *c.seed;
  auto cfg = DistanceExperimentConfig::from_json(cfg_json);
  if (c.threads) cfg.threads = c.threads;

  const auto records = run_distance_experiment(cfg);
  if (c.out.empty()) {
    write_csv(out, records);
  } else {
    const auto files = emit(records, c.out, "dist", c.format == "csv+plot");
    out << files.csv.string() << '\n';
    for (const auto& p : files.plots) out << p.string() << '\n';
  }
  for (std::size_t d : cfg.d_list) {
    std::vector<ExperimentRecord> group;
    for (const auto& r : records)
      if (r.d == d) group.push_back(r);
    try {
      const auto fit = fit_power_law(group);
      err << "d=" << d << " slope=" << fit.slope << " C_fit=" << fit.C_fit << " r2=" << fit.r2
          << " rows=" << fit.rows_used << '\n';
    } catch (const FitError& e) {
      err << "d=" << d << " no fit: " << e.what() << '\n';
    }
  }
  return kExitOk;
}

int cmd_probe_compressible(const Common& c, std::ostream& out) {
  const json cfg = load_config(c.config);
  CompressibleProbeConfig p;
  p.n = c.n.value_or(get_or(cfg, "n", p.n));
  p.N = get_or(cfg, "N", p.n);
  if (cfg.contains("a_model")) p.a_model = MatrixModelSpec::parse(cfg.at("a_model"));
  p.params = sphere_params(cfg);
  p.trials = c.trials.value_or(get_or(cfg, "trials", p.trials));
  p.samples_per_trial = get_or(cfg, "samples_per_trial", p.samples_per_trial);
  p.c = get_or(cfg, "c", p.c);
  p.seed = SeedSpec{c.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1))};
  const auto rep = run_compressible_probe(p);
  write_json(rep.to_json(), c, "probe_compressible.json", out);
  return rep.all_compressible ? kExitOk : kExitViolation;
}

int cmd_probe_tensorize(const Common& c, std::ostream& out) {
  const json cfg = load_config(c.config);
  TensorizationProbeConfig p;
  if (cfg.contains("law")) p.xi_law = parse_distribution(cfg.at("law"));
  p.d = get_or(cfg, "d", p.d);
  if (!c.d.empty()) p.d = c.d.front();
  p.t_grid = c.t_grid.empty() ? get_or(cfg, "t_grid", p.t_grid) : c.t_grid;
  p.trials = c.trials.value_or(get_or(cfg, "trials", p.trials));
  p.eps0 = get_or(cfg, "eps0", p.eps0);
  p.K_max = get_or(cfg, "K_max", p.K_max);
  p.seed = SeedSpec{c.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1))};
  TensorizationProbeReport rep;
  try {
    rep = run_tensorization_probe(p);
  } catch (const HypothesisFailure& e) {
    out << json{{"probe", "tensorize"}, {"hypothesis", "failed"}, {"reason", e.what()}}.dump(2) << '\n';
    return kExitViolation;
  }
  write_json(rep.to_json(), c, "probe_tensorize.json", out);
  if (!c.out.empty()) emit(rep.rows, c.out, "tensorize", c.format == "csv+plot");
  return kExitOk;
}

int cmd_probe_unstructured(const Common& c, std::ostream& out) {
  const json cfg = load_config(c.config);
  UnstructuredProbeConfig p;
  const std::size_t n = c.n.value_or(get_or<std::size_t>(cfg, "n", 8));
  if (n == 0) throw ConfigError("n must be positive");
  if (cfg.contains("lambdas") && cfg.at("lambdas").is_array()) {
    const auto l = get_or(cfg, "lambdas", std::vector<double>{});
    p.lambdas = Eigen::Map<const Eigen::VectorXd>(l.data(), static_cast<Eigen::Index>(l.size()));
  } else {
    p.lambdas = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), get_or(cfg, "lambda", 0.01));
  }
  if (cfg.contains("x_model")) p.x_model = VectorModelSpec::parse(cfg.at("x_model"));
  p.L = get_or(cfg, "L", p.L);
  p.u = get_or(cfg, "u", p.u);
  p.gamma = get_or(cfg, "gamma", p.gamma);
  p.params = sphere_params(cfg);
  p.trials = c.trials.value_or(get_or(cfg, "trials", p.trials));
  p.seed = SeedSpec{c.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1))};
  const auto rep = run_unstructured_probe(p);
  write_json(rep.to_json(), c, "probe_unstructured.json", out);
  return rep.all_members ? kExitOk : kExitViolation;
}

int cmd_props(const Common& c, std::ostream& out) {
  const json cfg = load_config(c.config);
  const SeedSpec seed{c.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1))};
  const auto rep = run_property_suite(seed);
  std::size_t pass = 0, fail = 0, vac = 0;
  for (const auto& r : rep.results) {
    out << (r.ok() ? "PASS " : "FAIL ") << r.name << " cases=" << r.cases << " vacuous=" << r.vacuous
        << " violated=" << r.violated << " worst_margin=" << r.worst_margin
        << (r.note.empty() ? "" : " (" + r.note + ")") << '\n';
    (r.ok() ? pass : fail) += 1;
    vac += r.vacuous;
  }
  out << "summary: " << pass << " passed, " << fail << " failed, " << vac << " vacuous instances\n";
  if (!c.out.empty()) {
    std::ostringstream sink;
    write_json(rep.to_json(), c, "props.json", sink);
  }
  return rep.ok() ? kExitOk : kExitViolation;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized LCD and distance laboratory"};
  app.require_subcommand(1);

  Common c_lcd, c_net, c_dist, c_cmp, c_ten, c_uns, c_props;

  auto* lcd = app.add_subcommand("lcd", "LCD solver");
  lcd->require_subcommand(1);
  auto* lcd_compute = lcd->add_subcommand("compute", "one LCD query");
  add_common(lcd_compute, c_lcd);
  std::string kind, law;
  std::vector<double> v;
  std::optional<double> L, u, theta_max;
  lcd_compute->add_option("--kind", kind, "essential, logarithmic, randomized or randomized-logarithmic");
  lcd_compute->add_option("--v", v, "vector, comma separated")->delimiter(',');
  lcd_compute->add_option("--L", L, "L parameter");
  lcd_compute->add_option("--u", u, "u parameter");
  lcd_compute->add_option("--theta-max", theta_max, "search ceiling");
  lcd_compute->add_option("--law", law, "entry law name or JSON object");

  auto* net = app.add_subcommand("net", "weight nets and net approximation");
  net->require_subcommand(1);
  auto* net_audit = net->add_subcommand("audit", "domination, regularized norm and certificate audits");
  add_common(net_audit, c_net);

  auto* dist = app.add_subcommand("dist", "distance experiment");
  dist->require_subcommand(1);
  auto* dist_run = dist->add_subcommand("run", "run the experiment and emit CSV");
  add_common(dist_run, c_dist);

  auto* probe = app.add_subcommand("probe", "empirical probes");
  probe->require_subcommand(1);
  auto* p_cmp = probe->add_subcommand("compressible", "compressible vectors under a random matrix");
  auto* p_ten = probe->add_subcommand("tensorize", "small ball of sums of squares");
  auto* p_uns = probe->add_subcommand("unstructured", "LCD of structured lattice points");
  add_common(p_cmp, c_cmp);
  add_common(p_ten, c_ten);
  add_common(p_uns, c_uns);

  auto* props = app.add_subcommand("props", "property suite");
  props->require_subcommand(1);
  auto* props_check = props->add_subcommand("check", "run every registered property");
  add_common(props_check, c_props);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*lcd_compute) return cmd_lcd(c_lcd, kind, v, L, u, theta_max, law, out);
    if (*net_audit) return cmd_net_audit(c_net, out);
    if (*dist_run) return cmd_dist(c_dist, out, err);
    if (*p_cmp) return cmd_probe_compressible(c_cmp, out);
    if (*p_ten) return cmd_probe_tensorize(c_ten, out);
    if (*p_uns) return cmd_probe_unstructured(c_uns, out);
    if (*props_check) return cmd_props(c_props, out);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace lcdlab
