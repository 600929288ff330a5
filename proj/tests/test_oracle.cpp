#include <doctest.h>

#include "test_support.hpp"
#include "twinkit/energy.hpp"
#include "twinkit/error.hpp"
#include "twinkit/oracle.hpp"
#include "twinkit/random.hpp"

using namespace twinkit;
using namespace twinkit::testing;

namespace {

double column_mean(const Matrix& m, std::size_t j) {
  double s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j);
  return s / static_cast<double>(m.rows());
}

double column_cov(const Matrix& m, std::size_t a, std::size_t b) {
  const double ma = column_mean(m, a), mb = column_mean(m, b);
  double s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += (m(i, a) - ma) * (m(i, b) - mb);
  return s / static_cast<double>(m.rows() - 1);
}

}  // namespace

TEST_CASE("Rng is reproducible and its distributions are sane") {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // mt19937_64 with the default seed: the standard fixes the 10000th output.
  std::mt19937_64 ref;
  ref.discard(9999);
  CHECK(ref() == 9981545732273789042ULL);

  Rng r(6);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[r.uniform_index(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);

  double s = 0, ss = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    ss += z * z;
  }
  CHECK(std::abs(s / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(ss / n - 1.0) < 5.0 * std::sqrt(2.0 / n));

  auto pick = r.sample_without_replacement(10, 10);
  std::sort(pick.begin(), pick.end());
  CHECK(pick == naive_all(10));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
}

TEST_CASE("cholesky of the AR(1) covariance") {
  const auto s = ar1_covariance(5);
  CHECK(s(0, 3) == 0.125);
  CHECK(s(4, 2) == 0.25);
  const auto l = cholesky(s);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double v = 0;
      for (std::size_t k = 0; k < 5; ++k) v += l(i, k) * l(j, k);
      CHECK(v == doctest::Approx(s(i, j)).epsilon(1e-14));
      if (j > i) CHECK(l(i, j) == 0.0);
    }
  }
  CHECK_THROWS_AS(cholesky(Matrix(2, 2, {1, 2, 2, 1})), DataError);
}

TEST_CASE("generate_mvn") {
  SUBCASE("dim 1 is standard normal") {
    const std::size_t n = 50000;
    auto t = generate_mvn({n, 1, 3});
    CHECK(std::abs(column_cov(t.values, 0, 0) - 1.0) < 3.0 * std::sqrt(2.0 / n));
  }
  SUBCASE("dim 2 has correlation 0.5") {
    const std::size_t n = 100000;
    auto t = generate_mvn({n, 2, 4});
    const double corr = column_cov(t.values, 0, 1) /
                        std::sqrt(column_cov(t.values, 0, 0) * column_cov(t.values, 1, 1));
    // Standard error of a sample correlation: (1 - rho^2) / sqrt(n).
    const double se = (1.0 - 0.25) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(corr - 0.5) < 5.0 * se);
  }
  SUBCASE("dim 4 covariance follows 0.5^|i-j|") {
    const std::size_t n = 100000;
    auto t = generate_mvn({n, 4, 5});
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        CHECK(std::abs(column_cov(t.values, a, b) - std::pow(0.5, std::abs(int(a) - int(b)))) < 0.03);
  }
  SUBCASE("seeded determinism") {
    CHECK(generate_mvn({100, 3, 9}).values == generate_mvn({100, 3, 9}).values);
    CHECK_FALSE(generate_mvn({100, 3, 9}).values == generate_mvn({100, 3, 10}).values);
  }
  SUBCASE("bad shapes") {
    CHECK_THROWS_AS(generate_mvn({1, 3, 0}), UsageError);
    CHECK_THROWS_AS(generate_mvn({10, 0, 0}), UsageError);
  }
}

TEST_CASE("generate_parabola moments") {
  const std::size_t n = 100000;
  auto t = generate_parabola(n, 8);
  CHECK(t.cols() == 2);
  const double sn = std::sqrt(static_cast<double>(n));
  CHECK(std::abs(column_mean(t.values, 0)) < 5.0 / sn);
  // E[Y] = E[X^2] = 1, Var(Y) = Var(X^2) + 1 = 3.
  CHECK(std::abs(column_mean(t.values, 1) - 1.0) < 5.0 * std::sqrt(3.0) / sn);
  CHECK(generate_parabola(50, 1).values == generate_parabola(50, 1).values);
  CHECK(generate_parabola(50, 1).rows() == 50);
}

TEST_CASE("exhaustive search on the four-point line") {
  // Enumerated with the double-loop oracle: {0,1} and {2,3} give 0.75, the other four 0.25.
  const auto data = points_1d({0, 1, 2, 3});
  auto res = exhaustive_search(data, 2);
  CHECK(res.best == IndexSet{0, 2});
  CHECK(res.best_energy == 0.25);
  CHECK(res.evaluated == 6);
  CHECK(res.median_energy == 0.25);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b)
      CHECK(naive_energy_full(data.values, {a, b}) == (b - a == 1 && (a == 0 || a == 2) ? 0.75 : 0.25));
  CHECK_THROWS_AS(exhaustive_search(data, 4), DataError);
  CHECK_THROWS_AS(exhaustive_search(data, 0), DataError);
}

TEST_CASE("exhaustive search beats random subsets and honors the guard") {
  Gen gen(61);
  const Dataset data = as_is(gen.gaussian_matrix(11, 2));
  auto [best, e] = exhaustive_best_subset(data, 4);
  CHECK(best.size() == 4);
  CHECK(e == energy_full(best, data));
  for (int t = 0; t < 100; ++t) {
    auto s = random_subset(11, 4, static_cast<std::uint64_t>(t));
    CHECK(e <= energy_full(s, data));
  }
  const Dataset big = as_is(gen.gaussian_matrix(30, 1));
  CHECK_THROWS_AS(exhaustive_search(big, 15), DataError);  // C(30,15) > 1e6
}

TEST_CASE("linear scan oracle") {
  Matrix m(2, 1, {-1, 1});
  std::vector<std::uint8_t> none(2, 0), all(2, 1);
  std::vector<double> q{0.0};
  CHECK(linear_scan_nn(m, none, q, 1).front().row == 0);
  CHECK_THROWS_AS(linear_scan_nn(m, all, q, 1), DataError);
  CHECK(linear_scan_nn(m, none, q, 2).size() == 2);
}

TEST_CASE("random folds partition the rows") {
  auto folds = random_folds(10, 3, 4);
  CHECK(folds.size() == 3);
  CHECK(folds[0].size() == 4);
  CHECK(folds[1].size() == 3);
  std::vector<int> seen(10, 0);
  for (const auto& f : folds)
    for (auto i : f) ++seen[i];
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

TEST_CASE("rank-sum test matches reference values") {
  // Reference: Mann-Whitney U, normal approximation with tie and continuity corrections.
  std::vector<double> x{1, 2, 3, 5.5}, y{4, 5, 5.5, 6, 7};
  auto r = rank_sum_test(x, y);
  CHECK(r.u == 2.5);
  CHECK(r.p_less == doctest::Approx(0.04254996625783537).epsilon(1e-10));

  std::vector<double> x2{1, 2, 2, 9}, y2{2, 3, 4};
  auto r2 = rank_sum_test(x2, y2);
  CHECK(r2.u == 4.0);
  CHECK(r2.p_less == doctest::Approx(0.2910398259647511).epsilon(1e-10));

  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  std::vector<double> v{1, 2, 3};
  CHECK(mean(v) == 2);
}
