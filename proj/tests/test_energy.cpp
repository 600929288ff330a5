#include <doctest.h>

#include <algorithm>

#include "test_support.hpp"
#include "twinkit/energy.hpp"
#include "twinkit/error.hpp"
#include "twinkit/oracle.hpp"

using namespace twinkit;
using namespace twinkit::testing;

TEST_CASE("energy estimators on the four-point line") {
  const auto data = points_1d({0, 1, 2, 3});
  const IndexSet a{0, 2}, b{1, 3};

  // 2/(2*4)*10 - 1/4*4 - 1/16*20
  CHECK(energy_full(a, data) == 0.25);
  // 2/(2*2)*6 - 1 - 1
  CHECK(energy_between(a, b, data) == 1.0);
  // 2.5 - 1
  CHECK(energy_plot_metric(a, data) == 1.5);

  auto check = verify_proposition1(a, data);
  CHECK(check.lhs == 0.25);
  CHECK(check.rhs == 0.25);
  CHECK(check.relative_gap <= 1e-12);

  auto report = energy_report(a, data);
  CHECK(report.full == 0.25);
  CHECK(report.between == 1.0);
  CHECK(report.plot_metric == 1.5);
  CHECK(report.n == 2);
  CHECK(report.N == 4);
}

TEST_CASE("energies vanish when every point coincides") {
  const auto data = points_1d({4, 4, 4, 4, 4});
  CHECK(energy_full(IndexSet{1, 3}, data) == 0.0);
  CHECK(energy_plot_metric(IndexSet{1, 3}, data) == 0.0);
  CHECK(energy_between(IndexSet{0}, IndexSet{2}, data) == 0.0);
}

TEST_CASE("energy_between of two point masses is twice their separation") {
  const auto data = points_1d({-1.5, -1.5, -1.5, 2.0, 2.0});
  CHECK(energy_between(IndexSet{0, 1, 2}, IndexSet{3, 4}, data) == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("plot metric minus full energy is the constant whole-data term") {
  Gen gen(21);
  const Dataset data = as_is(gen.gaussian_matrix(60, 3));
  const double constant = naive_pair_mean(data.values, naive_all(60), naive_all(60));
  for (int t = 0; t < 20; ++t) {
    const auto s = gen.proper_subset(60);
    CHECK(rel_diff(energy_plot_metric(s, data) - energy_full(s, data), constant) <= 1e-10);
  }
}

TEST_CASE("shrinkage identity on the degenerate n = N - 1 split") {
  // {0,1,3}, subset {0,1}: full = 7/3 - 1/2 - 4/3 = 1/2; between = 5 - 1/2 - 0 = 9/2.
  const auto data = points_1d({0, 1, 3});
  auto c = verify_proposition1(IndexSet{0, 1}, data);
  CHECK(c.lhs == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.rhs == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(energy_between(IndexSet{0, 1}, IndexSet{2}, data) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(c.relative_gap <= 1e-12);
}

TEST_CASE("energies match the naive double-loop oracle") {
  Gen gen(22);
  for (int t = 0; t < 100; ++t) {
    const auto n = gen.uniform(2, 120), d = gen.uniform(1, 6);
    const Dataset data = standardize(RawTable{gen.gaussian_matrix(n, d), std::vector<std::string>(d, "c")});
    const auto s = gen.proper_subset(n);
    const auto rest = naive_complement(s, n);
    CHECK(rel_diff(energy_full(s, data), naive_energy_full(data.values, s)) <= 1e-10);
    CHECK(rel_diff(energy_between(s, rest, data), naive_energy_between(data.values, s, rest)) <= 1e-10);
    CHECK(rel_diff(energy_plot_metric(s, data), naive_plot_metric(data.values, s)) <= 1e-10);
  }
}

TEST_CASE("properties: identity, non-negativity and permutation invariance") {
  Gen gen(23);
  for (int t = 0; t < 200; ++t) {
    const auto n = gen.uniform(2, 80), d = gen.uniform(1, 8);
    const Dataset data = as_is(t % 2 ? gen.gaussian_matrix(n, d) : gen.lattice_matrix(n, d, 3));
    auto s = gen.proper_subset(n);
    auto rest = complement(s, n);

    if (energy_full(s, data) != 0.0) CHECK(verify_proposition1(s, data).relative_gap <= 1e-9);
    CHECK(energy_between(s, rest, data) >= -1e-9);

    auto s2 = s, rest2 = rest;
    std::shuffle(s2.begin(), s2.end(), gen.engine());
    std::shuffle(rest2.begin(), rest2.end(), gen.engine());
    CHECK(energy_full(s2, data) == energy_full(s, data));
    CHECK(energy_plot_metric(s2, data) == energy_plot_metric(s, data));
    CHECK(energy_between(s2, rest2, data) == energy_between(s, rest, data));
  }
}

TEST_CASE("energy errors") {
  const auto data = points_1d({0, 1, 2, 3});
  CHECK_THROWS_AS(energy_full(IndexSet{}, data), DataError);
  CHECK_THROWS_AS(energy_full(IndexSet{0, 1, 2, 3}, data), DataError);
  CHECK_THROWS_AS(energy_full(IndexSet{0, 0}, data), DataError);
  CHECK_THROWS_AS(energy_full(IndexSet{9}, data), DataError);
  CHECK_THROWS_AS(energy_plot_metric(IndexSet{0, 1, 2, 3}, data), DataError);
  CHECK_THROWS_AS(energy_between(IndexSet{0, 1}, IndexSet{1, 2}, data), DataError);
  CHECK_THROWS_AS(energy_between(IndexSet{}, IndexSet{1, 2}, data), DataError);
  CHECK_THROWS_AS(verify_proposition1(IndexSet{}, data), DataError);
}

TEST_CASE("complement") {
  CHECK(complement(IndexSet{3, 0}, 5) == IndexSet{1, 2, 4});
  CHECK_THROWS_AS(complement(IndexSet{5}, 5), DataError);
}
