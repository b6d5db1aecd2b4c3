#include <doctest.h>

#include <cmath>
#include <functional>

#include "lcdlab/geometry.hpp"
#include "lcdlab/rng.hpp"

using namespace lcdlab;

namespace {

Eigen::VectorXd random_unit(Stream& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v / v.norm();
}

// min over all size-k supports T of |x - x_T / |x_T||, computed directly.
double brute_sparse_distance(const Eigen::VectorXd& x, std::size_t k) {
  const auto n = static_cast<std::size_t>(x.size());
  double best = 1e300;
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
      for (auto i : idx) y[static_cast<Eigen::Index>(i)] = x[static_cast<Eigen::Index>(i)];
      if (y.norm() == 0.0) return;
      best = std::min(best, (x - y / y.norm()).norm());
      return;
    }
    for (std::size_t i = start; i + (k - depth) <= n; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("distance to the integer lattice") {
  CHECK(dist_to_integer_lattice(Eigen::VectorXd::Constant(1, 0.5)) == doctest::Approx(0.5));
  CHECK(dist_to_integer_lattice(Eigen::Vector2d(1.25, -0.75)) == doctest::Approx(std::sqrt(0.125)));
  CHECK(dist_to_integer_lattice(Eigen::Vector2d(3.0, -2.0)) == 0.0);
}

TEST_CASE("sphere parameters") {
  SphereParams p;
  CHECK(p.sparsity(20) == 2);
  CHECK(p.sparsity(30) == 3);
  CHECK(p.sparsity(9) == 0);
  CHECK_THROWS_AS((SphereParams{0.0, 0.3}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SphereParams{0.1, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("compressibility examples") {
  const SphereParams p{0.1, 0.5};
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(20);
  e1[0] = 1.0;
  const auto r1 = compressibility(e1, p);
  CHECK(r1.is_compressible);
  CHECK(r1.sparse_distance == doctest::Approx(0.0));

  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(20, 1.0 / std::sqrt(20.0));
  const auto r2 = compressibility(flat, p);
  CHECK_FALSE(r2.is_compressible);
  CHECK(r2.sparse_distance == doctest::Approx(std::sqrt(2.0 - 2.0 * std::sqrt(2.0 / 20.0))).epsilon(1e-12));
  CHECK(r2.sparse_distance == doctest::Approx(1.169).epsilon(1e-3));
  CHECK(r2.sparse_distance == doctest::Approx(brute_sparse_distance(flat, 2)).epsilon(1e-12));
  CHECK(r2.best_support == std::vector<std::size_t>{0, 1});

  Eigen::VectorXd two = Eigen::VectorXd::Zero(20);
  two[3] = 0.6;
  two[7] = -0.8;
  CHECK(compressibility(two, p).sparse_distance == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(compressibility(2.0 * flat, p), NormalizationError);
  CHECK_THROWS_AS(compressibility(Eigen::VectorXd::Constant(5, 1.0 / std::sqrt(5.0)), p), std::invalid_argument);
}

TEST_CASE("compressibility closed form agrees with support search") {
  Stream rng = SeedSpec{2024}.substream(0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<Eigen::Index>(4 + rng.below(9));
    const SphereParams p{0.1 + 0.4 * rng.uniform(), 0.3};
    const auto k = p.sparsity(static_cast<std::size_t>(n));
    if (k == 0) continue;
    const Eigen::VectorXd x = random_unit(rng, n);
    CHECK(compressibility(x, p).sparse_distance == doctest::Approx(brute_sparse_distance(x, k)).epsilon(1e-9));
  }
}

TEST_CASE("spread sets") {
  const SphereParams p{0.1, 0.5};
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(20, 1.0 / std::sqrt(20.0));
  const auto s = spread_set(flat, p);
  REQUIRE(s.has_value());
  CHECK(s->indices.size() == 20);
  CHECK(s->lower == doctest::Approx(0.5 / std::sqrt(40.0)));
  CHECK(s->upper == doctest::Approx(1.0 / std::sqrt(2.0)));

  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(20);
  e1[0] = 1.0;
  CHECK_FALSE(spread_set(e1, p).has_value());

  Stream rng = SeedSpec{8}.substream(0);
  int tested = 0;
  while (tested < 1000) {
    const Eigen::VectorXd x = random_unit(rng, 50);
    if (compressibility(x, p).is_compressible) continue;
    ++tested;
    const auto j = spread_set(x, p);
    REQUIRE(j.has_value());
    CHECK(static_cast<double>(j->indices.size()) >= 0.5 * 0.25 * 0.1 * 50);
  }
}

TEST_CASE("distance to a column span") {
  const Eigen::Index n = 6, m = 4;
  const Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, m);
  const Eigen::VectorXd X = (Eigen::VectorXd(n) << 1, 2, 3, 4, 5, 6).finished();
  CHECK(distance_to_colspan(E, X) == doctest::Approx(std::sqrt(25.0 + 36.0)));
  CHECK(distance_to_colspan(E, E * Eigen::Vector4d(1, -2, 3, 0.5)) == doctest::Approx(0.0).epsilon(1e-9));

  const Eigen::MatrixXd col = Eigen::Vector2d(1, 0);
  const Eigen::VectorXd r = project_orthocomplement(col, Eigen::Vector2d(3, 4));
  CHECK(r[0] == doctest::Approx(0.0));
  CHECK(r[1] == doctest::Approx(4.0));
  CHECK(project_orthocomplement(col, Eigen::Vector2d(0, 7)) == Eigen::Vector2d(0, 7));

  Eigen::MatrixXd deficient(4, 3);
  deficient << 1, 2, 0, 0, 0, 0, 1, 2, 1, 0, 0, 0;
  const ColumnSpan span(deficient);
  CHECK(span.rank() == 2);
  CHECK(span.basis().cols() == 2);
  CHECK(span.complement_basis().cols() == 2);
  CHECK((span.basis().transpose() * span.complement_basis()).norm() < 1e-12);

  Stream rng = SeedSpec{4}.substream(0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd A(10, 6);
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = rng.normal();
    Eigen::VectorXd x(10);
    for (Eigen::Index i = 0; i < 10; ++i) x[i] = rng.normal();
    const Eigen::VectorXd p = project_orthocomplement(A, x);
    CHECK(p.norm() == doctest::Approx(distance_to_colspan(A, x)).epsilon(1e-12));
    CHECK((project_orthocomplement(A, p) - p).norm() < 1e-9);
    CHECK((A.transpose() * p).norm() < 1e-9);
  }
}

TEST_CASE("gaussian distance squared has mean d") {
  const Eigen::Index n = 64, d = 4;
  const int trials = 100000;
  double s = 0.0, s2 = 0.0;
  Eigen::MatrixXd A(n, n - d);
  Eigen::VectorXd X(n);
  for (int k = 0; k < trials; ++k) {
    Stream rng = SeedSpec{17}.substream(static_cast<std::uint64_t>(k));
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      for (Eigen::Index i = 0; i < n; ++i) A(i, j) = rng.normal();
    for (Eigen::Index i = 0; i < n; ++i) X[i] = rng.normal();
    const double q = std::pow(distance_to_colspan(A, X), 2);
    s += q;
    s2 += q * q;
  }
  const double mean = s / trials;
  const double se = std::sqrt((s2 / trials - mean * mean) / trials);
  CHECK(std::abs(mean - 4.0) < 3.0 * se);
}
