#include <doctest.h>

#include <cmath>

#include "lcdlab/experiments.hpp"

using namespace lcdlab;

namespace {

ExperimentRecord row(double t, double phat, std::uint64_t trials = 1000000) {
  ExperimentRecord r;
  r.n = 32;
  r.d = 3;
  r.t = t;
  r.trials = trials;
  r.phat = phat;
  r.hits = static_cast<std::uint64_t>(std::llround(phat * static_cast<double>(trials)));
  return r;
}

DistanceExperimentConfig small_gaussian() {
  DistanceExperimentConfig cfg;
  cfg.n = 16;
  cfg.d_list = {1, 2};
  cfg.t_grid = {0.0, 0.1, 0.5};
  cfg.trials = 20000;
  cfg.seed = SeedSpec{3};
  return cfg;
}

}  // namespace

TEST_CASE("power law fit") {
  SUBCASE("exact synthetic cube") {
    std::vector<ExperimentRecord> rows;
    for (double t : {0.1, 0.2, 0.3, 0.5, 0.8}) rows.push_back(row(t, std::pow(0.7 * t, 3.0)));
    const auto fit = fit_power_law(rows);
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(fit.C_fit == doctest::Approx(0.7).epsilon(1e-3));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.rows_used == 5);
    CHECK(fit.t_min == 0.1);
    CHECK(fit.t_max == 0.8);
  }
  SUBCASE("rows under the floor are dropped") {
    std::vector<ExperimentRecord> rows;
    for (double t : {0.2, 0.3, 0.5, 0.8}) rows.push_back(row(t, std::pow(0.7 * t, 3.0), 10000));
    rows.push_back(row(0.01, 5e-4, 10000));
    rows.push_back(row(0.02, 0.0, 10000));
    const auto fit = fit_power_law(rows);
    CHECK(fit.rows_used == 4);
    CHECK(fit.t_min == 0.2);
  }
  SUBCASE("errors") {
    std::vector<ExperimentRecord> rows;
    CHECK_THROWS_AS(fit_power_law(rows), FitError);
    for (double t : {0.1, 0.2, 0.3}) rows.push_back(row(t, t));
    CHECK_THROWS_AS(fit_power_law(rows), FitError);
    rows.push_back(row(0.4, 0.4));
    rows.back().d = 2;
    CHECK_THROWS_AS(fit_power_law(rows), FitError);
  }
}

TEST_CASE("hypothesis flags") {
  DistanceExperimentConfig cfg;
  cfg.n = 64;
  cfg.constants.lambda = 0.1;
  CHECK(hypothesis_flags(cfg, 1) == "ok");
  CHECK(hypothesis_flags(cfg, 2) == "out-of-theorem-range");
  CHECK(hypothesis_flags(cfg, 4) == "out-of-theorem-range");

  cfg.x_model = VectorModelSpec::iid(EntryDistribution::bernoulli(0.95));
  CHECK(hypothesis_flags(cfg, 1).find("anticoncentration>b") != std::string::npos);

  cfg.x_model = VectorModelSpec::iid(EntryDistribution::gaussian(0.0, 1.0));
  cfg.constants.c1 = 0.01;
  CHECK(hypothesis_flags(cfg, 1).find("second-moment>c1*n^2") != std::string::npos);
  cfg.constants.c1 = 1.0;

  cfg.x_model = VectorModelSpec::iid(EntryDistribution::gaussian(0.0, 1.0));
  cfg.a_model = MatrixModelSpec::iid(EntryDistribution::gaussian(0.0, 1.5));
  CHECK(hypothesis_flags(cfg, 1) == "hs-budget>K*N*n");
}

TEST_CASE("distance experiment") {
  const auto cfg = small_gaussian();
  const auto rows = run_distance_experiment(cfg);
  REQUIRE(rows.size() == 6);

  SUBCASE("layout") {
    for (const auto& r : rows) {
      CHECK(r.n == 16);
      CHECK(r.trials == 20000);
      CHECK(r.seed == 3);
      CHECK(r.phat == doctest::Approx(static_cast<double>(r.hits) / 20000.0));
      CHECK(r.stderr == doctest::Approx(std::sqrt(r.phat * (1.0 - r.phat) / 20000.0)));
    }
    CHECK(rows[0].d == 1);
    CHECK(rows[3].d == 2);
    CHECK(rows[2].t == 0.5);
  }
  SUBCASE("zero radius catches nothing") {
    CHECK(rows[0].hits == 0);
    CHECK(rows[3].hits == 0);
  }
  SUBCASE("gaussian oracles") {
    const double p1 = std::erf(0.1 / std::sqrt(2.0));
    CHECK(std::abs(rows[1].phat - p1) <= 4.0 * std::sqrt(p1 * (1 - p1) / 20000.0));
    const double p2 = 1.0 - std::exp(-0.25);
    CHECK(std::abs(rows[5].phat - p2) <= 4.0 * std::sqrt(p2 * (1 - p2) / 20000.0));
  }
  SUBCASE("deterministic and thread independent") {
    auto again = cfg;
    again.threads = 1;
    CHECK(run_distance_experiment(again) == rows);
    again.threads = 3;
    CHECK(run_distance_experiment(again) == rows);
  }
  SUBCASE("raw distances score the same hits") {
    const auto dist = sample_distances(cfg, 2);
    REQUIRE(dist.size() == 20000);
    std::uint64_t hits = 0;
    for (double x : dist) hits += x <= 0.1 * std::sqrt(2.0);
    CHECK(hits == rows[4].hits);
  }
}

TEST_CASE("experiment configuration") {
  const auto cfg = small_gaussian();
  const auto back = DistanceExperimentConfig::from_json(cfg.to_json());
  CHECK(back.n == cfg.n);
  CHECK(back.d_list == cfg.d_list);
  CHECK(back.t_grid == cfg.t_grid);
  CHECK(back.trials == cfg.trials);
  CHECK(back.seed.master_seed == cfg.seed.master_seed);

  auto bad = cfg.to_json();
  bad["d"] = {16};
  CHECK_THROWS_AS(DistanceExperimentConfig::from_json(bad), ConfigError);
  bad = cfg.to_json();
  bad["d_list"] = {2};
  CHECK_THROWS_AS(DistanceExperimentConfig::from_json(bad), ConfigError);
  bad = cfg.to_json();
  bad["t_grid"] = {-0.1};
  CHECK_THROWS_AS(DistanceExperimentConfig::from_json(bad), ConfigError);
  bad = cfg.to_json();
  bad["trials"] = "many";
  CHECK_THROWS_AS(DistanceExperimentConfig::from_json(bad), ConfigError);
}
