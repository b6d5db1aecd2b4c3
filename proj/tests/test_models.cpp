#include <doctest.h>

#include <cmath>

#include "lcdlab/model_config.hpp"
#include "lcdlab/models.hpp"

using namespace lcdlab;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("finite laws are normalized and validated") {
  const auto d = EntryDistribution::finite({{2.0, 0.25}, {-1.0, 0.5}, {2.0, 0.25}, {5.0, 0.0}});
  REQUIRE(d.atoms().size() == 2);
  CHECK(d.atoms()[0].value == -1.0);
  CHECK(d.atoms()[1].prob == doctest::Approx(0.5));
  CHECK(d.mean() == doctest::Approx(0.5));
  CHECK(d.variance() == doctest::Approx(2.25));
  CHECK_THROWS_AS(EntryDistribution::finite({{0.0, 0.4}, {1.0, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(EntryDistribution::gaussian(0.0, 0.0), std::invalid_argument);

  std::vector<Atom> many;
  for (int i = 0; i < 65; ++i) many.push_back({static_cast<double>(i), 1.0 / 65});
  CHECK_THROWS_AS(EntryDistribution::finite(many), BudgetError);
}

TEST_CASE("symmetrize") {
  SUBCASE("rademacher") {
    const auto s = symmetrize(EntryDistribution::rademacher());
    REQUIRE(s.atoms().size() == 3);
    CHECK(s.atoms()[0].value == -2.0);
    CHECK(s.atoms()[0].prob == doctest::Approx(0.25));
    CHECK(s.atoms()[1].value == 0.0);
    CHECK(s.atoms()[1].prob == doctest::Approx(0.5));
    CHECK(s.atoms()[2].value == 2.0);
    CHECK(s.max_abs() == 2.0);
  }
  SUBCASE("point mass becomes zero") {
    const auto s = symmetrize(EntryDistribution::point_mass(7.0));
    REQUIRE(s.atoms().size() == 1);
    CHECK(s.atoms()[0].value == 0.0);
    CHECK(s.variance() == 0.0);
  }
  SUBCASE("gaussian") {
    const auto s = symmetrize(EntryDistribution::gaussian(3.0, 1.0));
    CHECK(s.sigma() == doctest::Approx(std::sqrt(2.0)));
    CHECK(s.variance() == doctest::Approx(2.0));
  }
  SUBCASE("symmetric with doubled variance") {
    const auto base = EntryDistribution::finite({{0.0, 0.2}, {1.0, 0.5}, {3.5, 0.3}});
    const auto s = symmetrize(base);
    CHECK(s.variance() == doctest::Approx(2.0 * base.variance()).epsilon(1e-12));
    const auto atoms = s.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      CHECK(atoms[i].value == -atoms[atoms.size() - 1 - i].value);
      CHECK(atoms[i].prob == doctest::Approx(atoms[atoms.size() - 1 - i].prob));
    }
  }
}

TEST_CASE("anti-concentration level") {
  CHECK(anticoncentration_level(EntryDistribution::rademacher()) == doctest::Approx(0.5));
  CHECK(anticoncentration_level(EntryDistribution::point_mass(0.0)) == doctest::Approx(1.0));
  CHECK(anticoncentration_level(EntryDistribution::gaussian(0.0, 1.0)) ==
        doctest::Approx(2.0 * normal_cdf(1.0) - 1.0).epsilon(1e-9));
  CHECK(anticoncentration_level(EntryDistribution::finite({{0.0, 0.5}, {1.5, 0.5}})) == doctest::Approx(1.0));
  CHECK(anticoncentration_level(EntryDistribution::finite({{0.0, 0.2}, {0.5, 0.3}, {3.0, 0.5}})) ==
        doctest::Approx(0.5));
  const double lvl = anticoncentration_level(EntryDistribution::bernoulli(0.3));
  CHECK(lvl > 0.0);
  CHECK(lvl <= 1.0);
}

TEST_CASE("vector sampling") {
  SUBCASE("point mass") {
    const auto m = RandomVectorModel::iid(4, EntryDistribution::point_mass(3.0));
    CHECK(sample_vector(m, SeedSpec{1}, 0) == Eigen::Vector4d(3, 3, 3, 3));
    CHECK(m.second_moment() == doctest::Approx(36.0));
  }
  SUBCASE("rademacher support and determinism") {
    const auto m = RandomVectorModel::iid(16, EntryDistribution::rademacher());
    for (std::uint64_t k = 0; k < 50; ++k) {
      const auto v = sample_vector(m, SeedSpec{9}, k);
      for (Eigen::Index i = 0; i < v.size(); ++i) CHECK(std::abs(v[i]) == 1.0);
      CHECK(v == sample_vector(m, SeedSpec{9}, k));
    }
  }
  SUBCASE("bernoulli mean") {
    const auto m = RandomVectorModel::iid(1, EntryDistribution::bernoulli(0.3));
    double s = 0.0;
    const int N = 100000;
    for (int k = 0; k < N; ++k) s += sample_vector(m, SeedSpec{3}, static_cast<std::uint64_t>(k))[0];
    CHECK(std::abs(s / N - 0.3) < 3.0 * std::sqrt(0.21 / N));
  }
}

TEST_CASE("sample moments of finite laws match exact moments") {
  const std::vector<EntryDistribution> laws{
      EntryDistribution::rademacher(), EntryDistribution::bernoulli(0.15),
      EntryDistribution::finite({{-2.0, 0.1}, {0.5, 0.6}, {4.0, 0.3}})};
  for (const auto& law : laws) {
    Stream rng = SeedSpec{77}.substream(0);
    const int N = 1000000;
    double s = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
      const double x = law.sample(rng);
      s += x;
      s2 += x * x;
    }
    const double m4 = [&] {
      double acc = 0;
      for (const auto& a : law.atoms()) acc += a.prob * std::pow(a.value - law.mean(), 4);
      return acc;
    }();
    CHECK(std::abs(s / N - law.mean()) < 4.0 * std::sqrt(law.variance() / N));
    const double var_hat = s2 / N - (s / N) * (s / N);
    CHECK(std::abs(var_hat - law.variance()) < 4.0 * std::sqrt((m4 - law.variance() * law.variance()) / N) +
                                                         16.0 * law.variance() / N);
  }
}

TEST_CASE("matrix sampling") {
  const RandomMatrixModel ones(2, 2, Broadcast::single, {EntryDistribution::point_mass(1.0)});
  CHECK(sample_matrix(ones, SeedSpec{1}, 0) == Eigen::Matrix2d::Ones());

  const RandomMatrixModel rad(4, 3, Broadcast::single, {EntryDistribution::rademacher()}, 12.0);
  CHECK(rad.expected_hs_sq() == doctest::Approx(12.0));
  double total = 0.0;
  for (std::uint64_t k = 0; k < 10000; ++k) total += sample_matrix(rad, SeedSpec{2}, k).squaredNorm();
  CHECK(total / 10000 == doctest::Approx(12.0));

  const RandomMatrixModel g(5, 3, Broadcast::single, {EntryDistribution::gaussian(0.0, 1.0)});
  CHECK(sample_matrix(g, SeedSpec{2}, 0) != sample_matrix(g, SeedSpec{2}, 1));
  CHECK(sample_matrix(g, SeedSpec{2}, 4) == sample_matrix(g, SeedSpec{2}, 4));

  CHECK_THROWS_AS(RandomMatrixModel(4, 3, Broadcast::single, {EntryDistribution::rademacher()}, 11.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(RandomMatrixModel(4, 3, Broadcast::per_column, {EntryDistribution::rademacher()}),
                  std::invalid_argument);

  const RandomMatrixModel cols(3, 2, Broadcast::per_column,
                               {EntryDistribution::point_mass(1.0), EntryDistribution::point_mass(-2.0)});
  const auto A = sample_matrix(cols, SeedSpec{1}, 0);
  CHECK(A.col(0) == Eigen::Vector3d::Ones());
  CHECK(A.col(1) == Eigen::Vector3d::Constant(-2.0));
  CHECK(cols.column_model(1).entry(0).mean() == -2.0);
}

TEST_CASE("configuration parsing") {
  using nlohmann::json;
  const auto g = parse_distribution(json{{"kind", "gaussian"}, {"sigma", 2.0}});
  CHECK(g.kind() == LawKind::gaussian);
  CHECK(g.variance() == doctest::Approx(4.0));
  const auto f = parse_distribution(json::parse(R"({"kind":"finite","atoms":[[-1,0.25],[2,0.75]],"mean_shift":1})"));
  CHECK(f.atoms()[0].value == 0.0);
  CHECK(f.atoms()[1].value == 3.0);
  const auto back = parse_distribution(to_json(f));
  CHECK(back.mean() == doctest::Approx(f.mean()));
  CHECK(back.variance() == doctest::Approx(f.variance()));
  CHECK_THROWS_AS(parse_distribution(json{{"kind", "cauchy"}}), ConfigError);
  CHECK_THROWS_AS(parse_distribution(json{{"sigma", 1}}), ConfigError);

  const auto v = VectorModelSpec::parse(json::parse(R"({"law":{"kind":"rademacher"},"variance_range":[0.5,2]})"));
  const auto model = v.build(5);
  CHECK(model.entry(0).variance() == doctest::Approx(0.5));
  CHECK(model.entry(4).variance() == doctest::Approx(2.0));
  CHECK(model.entry(2).variance() == doctest::Approx(1.25));

  const auto m = MatrixModelSpec::parse(json::parse(R"({"col_laws":[{"kind":"rademacher"},{"kind":"point","value":2}]})"));
  const auto A = m.build(3, 4);
  CHECK(A.law(0, 1).mean() == 2.0);
  CHECK(A.law(2, 3).mean() == 2.0);
  CHECK(A.law(1, 2).variance() == 1.0);
  CHECK_THROWS_AS(MatrixModelSpec::parse(json::parse(R"({"col_variance_range":[2,1],"law":{"kind":"rademacher"}})")),
                  ConfigError);
}

TEST_CASE("entry-cycled matrix layout") {
  std::vector<EntryDistribution> laws{EntryDistribution::point_mass(1.0)};
  for (int k = 0; k < 5; ++k) laws.push_back(EntryDistribution::point_mass(0.0));
  const auto spec = MatrixModelSpec::entry_cycle(laws);
  const Eigen::MatrixXd A = sample_matrix(spec.build(5, 5), SeedSpec{1}, 0);
  CHECK(A.isApprox(Eigen::MatrixXd::Identity(5, 5)));
  const auto back = MatrixModelSpec::parse(spec.to_json());
  CHECK(sample_matrix(back.build(5, 5), SeedSpec{1}, 0).isApprox(A));
  CHECK_THROWS_AS(MatrixModelSpec::entry_cycle({}), ConfigError);
}
