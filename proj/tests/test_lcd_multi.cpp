#include <doctest.h>

#include <cmath>

#include "lcdlab/geometry.hpp"
#include "lcdlab/lcd_multi.hpp"

using namespace lcdlab;

namespace {

LawVector iid(std::size_t n, const EntryDistribution& law) { return LawVector(n, SymmetrizedDistribution(law)); }

Eigen::VectorXd random_unit(Stream& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v / v.norm();
}

Eigen::MatrixXd orthonormal(Stream& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
  return ColumnSpan(g).basis();
}

}  // namespace

TEST_CASE("column minimum") {
  const auto rad = iid(3, EntryDistribution::rademacher());
  const Eigen::Vector3d v(0.2, -0.7, 0.4);
  const auto single = log_rlcd(v, rad, 1.0, 0.25);
  const auto both = log_rlcd_columns({rad, rad}, v, 1.0, 0.25);
  CHECK(both.result.value == doctest::Approx(single.value).epsilon(1e-12));
  CHECK_THROWS_AS(log_rlcd_columns({}, v, 1.0, 0.25), std::invalid_argument);

  Stream rng = SeedSpec{12}.substream(0);
  for (int k = 0; k < 50; ++k) {
    const std::vector<LawVector> cols{iid(3, EntryDistribution::rademacher()),
                                      iid(3, EntryDistribution::bernoulli(0.2 + 0.6 * rng.uniform())),
                                      iid(3, EntryDistribution::rademacher().scaled(0.5 + rng.uniform()))};
    const Eigen::VectorXd x = random_unit(rng, 3);
    const auto m = log_rlcd_columns(cols, x, 1.0, 0.25);
    for (std::size_t j = 0; j < cols.size(); ++j)
      CHECK(m.result.value <= log_rlcd(x, cols[j], 1.0, 0.25).value * (1.0 + 1e-9));
    CHECK(m.result.value == doctest::Approx(log_rlcd(x, cols[m.argmin], 1.0, 0.25).value).epsilon(1e-9));
  }
}

TEST_CASE("matrix LCD") {
  const auto laws = iid(5, EntryDistribution::rademacher());
  Stream rng = SeedSpec{21}.substream(0);

  SUBCASE("one row is the vector LCD") {
    const Eigen::VectorXd v = random_unit(rng, 5);
    const auto m = log_rlcd_matrix(v.transpose(), laws, 1.0, 0.25, 4, SeedSpec{1});
    CHECK(m.result.value == doctest::Approx(log_rlcd(v, laws, 1.0, 0.25).value).epsilon(1e-12));
    CHECK_THROWS_AS(log_rlcd_matrix(v.transpose(), laws, 1.0, 0.25, 0, SeedSpec{1}), std::invalid_argument);
  }
  SUBCASE("more directions never hurt") {
    const Eigen::MatrixXd V = orthonormal(rng, 5, 2).transpose();
    double prev = 1e300;
    for (std::size_t budget : {4, 16, 64, 256}) {
      const auto m = log_rlcd_matrix(V, laws, 1.0, 0.25, budget, SeedSpec{3});
      CHECK(m.result.value <= prev);
      prev = m.result.value;
    }
  }
  SUBCASE("two rows against a dense angular sweep") {
    for (int k = 0; k < 10; ++k) {
      const Eigen::MatrixXd V = orthonormal(rng, 5, 2).transpose();
      double sweep = 1e300;
      for (int a = 0; a < 360; ++a) {
        const double phi = 2.0 * M_PI * a / 360.0;
        const Eigen::VectorXd w = V.transpose() * Eigen::Vector2d(std::cos(phi), std::sin(phi));
        sweep = std::min(sweep, log_rlcd(w, laws, 1.0, 0.25).value);
      }
      const auto m = log_rlcd_matrix(V, laws, 1.0, 0.25, 360, SeedSpec{static_cast<std::uint64_t>(k)});
      CHECK(std::abs(m.result.value - sweep) <= 0.05 * sweep);
      CHECK(m.direction.norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("subspace LCD") {
  const auto laws = iid(6, EntryDistribution::rademacher());
  Stream rng = SeedSpec{8}.substream(0);
  SUBCASE("a line is the vector LCD") {
    const Eigen::VectorXd x = random_unit(rng, 6);
    const auto s = log_rlcd_subspace(x, laws, 1.0, 0.25, 16, SeedSpec{2});
    CHECK(s.result.value == doctest::Approx(log_rlcd(x, laws, 1.0, 0.25).value).epsilon(1e-12));
  }
  SUBCASE("whole space is bounded by a coordinate direction") {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(6, 6);
    const auto s = log_rlcd_subspace(I, laws, 1.0, 0.25, 64, SeedSpec{2});
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(6);
    e1[0] = 1.0;
    CHECK(s.result.value <= log_rlcd(e1, laws, 1.0, 0.25).value + 1e-12);
  }
  SUBCASE("basis must be orthonormal") {
    Eigen::MatrixXd B = orthonormal(rng, 6, 2);
    B.col(1) *= 1.01;
    CHECK_THROWS_AS(log_rlcd_subspace(B, laws, 1.0, 0.25, 16, SeedSpec{2}), std::invalid_argument);
  }
  SUBCASE("subspace and projection matrix agree") {
    for (int k = 0; k < 20; ++k) {
      const Eigen::MatrixXd U = orthonormal(rng, 6, 2);
      const auto s = log_rlcd_subspace(U, laws, 1.0, 0.25, 256, SeedSpec{static_cast<std::uint64_t>(k)});
      const auto m = log_rlcd_matrix(U.transpose(), laws, 1.0, 0.25, 1024, SeedSpec{static_cast<std::uint64_t>(k)});
      const double best = std::min(s.result.value, m.result.value);
      CHECK(std::abs(s.result.value - m.result.value) <= 0.05 * best + 2e-10);
    }
  }
}

TEST_CASE("L grid") {
  const auto g2 = lgrid(2.0);
  REQUIRE(g2.elements.size() == 21);
  CHECK(g2.elements.front() == doctest::Approx(2.0));
  CHECK(g2.elements[1] == doctest::Approx(2.1));
  CHECK(g2.elements.back() == doctest::Approx(4.0));
  const auto g1 = lgrid(1.0);
  REQUIRE(g1.elements.size() == 11);
  for (double e : g1.elements) {
    CHECK(e >= 1.0);
    CHECK(e <= 2.0);
  }
  const auto g = lgrid(1.37);
  CHECK(g.elements.size() <= static_cast<std::size_t>(std::floor(13.7)) + 2);
  CHECK_THROWS_AS(lgrid(0.5), std::invalid_argument);
}

TEST_CASE("monotonicity in L") {
  const double u = 0.1, L = 1.2;
  Stream rng = SeedSpec{40}.substream(0);
  SUBCASE("large LCD at L = 1 satisfies the hypothesis and the implication") {
    int found = 0;
    for (int k = 0; k < 4000 && found < 3; ++k) {
      const auto n = static_cast<Eigen::Index>(12 + rng.below(8));
      const auto laws = iid(static_cast<std::size_t>(n), EntryDistribution::rademacher());
      const Eigen::VectorXd x = random_unit(rng, n);
      if (log_rlcd(x, laws, 1.0, u).value < 2.0 * L / u) continue;
      ++found;
      const auto check = check_monotone_in_L(x, laws, L, 1.0, u);
      CHECK(check.hypothesis_threshold <= 2.0 * L / u);
      CHECK((check.verdict == Verdict::hold || check.verdict == Verdict::hold_at_ceiling));
    }
    CHECK(found > 0);
  }
  SUBCASE("hypothesis failure is vacuous") {
    const auto laws = iid(1, EntryDistribution::rademacher());
    const auto check = check_monotone_in_L(Eigen::VectorXd::Constant(1, 1.0), laws, 3.0, 1.0, 0.25);
    CHECK(check.verdict == Verdict::vacuous);
  }
  CHECK_THROWS_AS(check_monotone_in_L(Eigen::VectorXd::Constant(1, 1.0), iid(1, EntryDistribution::rademacher()), 1.0,
                                      2.0, 0.25),
                  std::invalid_argument);
}

TEST_CASE("comparison with the randomized LCD") {
  const auto laws = iid(1, EntryDistribution::rademacher());
  const Eigen::VectorXd e1 = Eigen::VectorXd::Constant(1, 1.0);
  const auto check = check_comparison(e1, laws, 1.0, 0.5, 1.0, 0.5);
  CHECK(check.verdict != Verdict::violated);
  CHECK(check.reading == "a=gamma, s=u");
  CHECK(check.margin >= 0.0);
  CHECK(check.ceiling == doctest::Approx(2.0 * std::exp(1.0)));
  CHECK_THROWS_AS(check_comparison(e1, laws, 1.0, 0.9, 1.0, 0.3), std::invalid_argument);
}

TEST_CASE("stability sandwich") {
  const auto laws = iid(3, EntryDistribution::rademacher());
  const Eigen::Vector3d x(0.5, -0.6, 0.55);
  SUBCASE("large perturbation is vacuous") {
    const auto c = check_stability(x, x, laws, 1.0, 0.25, 0.5, 1.5, 10.0);
    CHECK(c.verdict == Verdict::vacuous);
  }
  SUBCASE("outside the annulus is vacuous") {
    const auto c = check_stability(3.0 * x, 3.0 * x, laws, 1.0, 0.25, 0.5, 1.5, 1e-6);
    CHECK(c.verdict == Verdict::vacuous);
  }
  SUBCASE("identical vectors within the allowance hold") {
    const auto c = check_stability(x, x, laws, 1.0, 0.25, 0.5, 1.5, 1e-9);
    if (c.verdict != Verdict::vacuous) {
      CHECK(c.verdict == Verdict::hold);
      CHECK(c.upper_side <= c.D + 1e-9);
      CHECK(c.lower_side >= c.D - 1e-9);
    }
  }
  CHECK(total_variance(laws) == doctest::Approx(3.0));
}
