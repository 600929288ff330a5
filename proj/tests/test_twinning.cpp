#include <doctest.h>

#include <set>

#include "test_support.hpp"
#include "twinkit/error.hpp"
#include "twinkit/oracle.hpp"
#include "twinkit/twinning.hpp"

using namespace twinkit;
using namespace twinkit::testing;

namespace {

Dataset line(std::size_t n) {
  Matrix m(n, 1);
  for (std::size_t i = 0; i < n; ++i) m(i, 0) = static_cast<double>(i);
  return standardize(RawTable{m, {"x"}});
}

// Replays the run against the linear-scan oracle, checking every selection.
void check_replay(const Matrix& points, const TwinResult& result, std::size_t r) {
  std::vector<std::uint8_t> masked(points.rows(), 0);
  RowIndex previous_far = 0;
  for (std::size_t i = 0; i < result.subsets.size(); ++i) {
    const auto& s = result.subsets[i];
    const RowIndex u = s.front();
    if (i > 0) {
      CHECK(linear_scan_nn(points, masked, points.row(previous_far), 1).front().row == u);
    }
    if (i + 1 < result.subsets.size()) CHECK(s.size() == r);
    masked[u] = 1;
    const auto want = linear_scan_nn(points, masked, points.row(u), s.size() - 1);
    for (std::size_t j = 1; j < s.size(); ++j) CHECK(want[j - 1].row == s[j]);
    for (auto v : s) masked[v] = 1;
    previous_far = s.back();
  }
}

}  // namespace

TEST_CASE("six points, r = 2") {
  auto res = twin(line(6), {2, FixedIndex{0}});
  CHECK(res.subsets == std::vector<IndexSet>{{0, 1}, {2, 3}, {4, 5}});
  CHECK(res.d1 == IndexSet{0, 2, 4});
  CHECK(res.d2 == IndexSet{1, 3, 5});
}

TEST_CASE("six points, r = 3") {
  auto res = twin(line(6), {3, FixedIndex{0}});
  CHECK(res.subsets == std::vector<IndexSet>{{0, 1, 2}, {3, 4, 5}});
  CHECK(res.d1 == IndexSet{0, 3});
  CHECK(res.d2 == IndexSet{1, 2, 4, 5});
}

TEST_CASE("five points, r = 2: the last group is a singleton") {
  auto res = twin(line(5), {2, FixedIndex{0}});
  CHECK(res.subsets == std::vector<IndexSet>{{0, 1}, {2, 3}, {4}});
  CHECK(res.d1 == IndexSet{0, 2, 4});
  CHECK(res.d2 == IndexSet{1, 3});
}

TEST_CASE("select_start") {
  const auto sym = points_1d({-1.34, -0.45, 0.45, 1.34});
  CHECK(select_start(sym, FarthestFromCentroid{}) == 0);
  CHECK(select_start(sym, FixedIndex{2}) == 2);
  CHECK_THROWS_AS(select_start(sym, FixedIndex{4}), DataError);
  CHECK(select_start(sym, RandomStart{99}) == select_start(sym, RandomStart{99}));

  const auto skewed = points_1d({0, 1, 2, 10});
  CHECK(select_start(skewed, FarthestFromCentroid{}) == 3);

  std::set<RowIndex> seen;
  for (std::uint64_t s = 0; s < 200; ++s) seen.insert(select_start(sym, RandomStart{s}));
  CHECK(seen.size() == 4);
}

TEST_CASE("twin_compress") {
  CHECK(twin_compress(line(6), {2, FixedIndex{0}}) == IndexSet{0, 2, 4});
  const auto data = line(7);
  auto one = twin_compress(data, {7, FarthestFromCentroid{}});
  CHECK(one == IndexSet{select_start(data, FarthestFromCentroid{})});
  for (std::size_t r = 2; r <= 7; ++r) CHECK(twin_compress(data, {r, {}}).size() == (7 + r - 1) / r);
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(twin(line(4), {1, {}}), UsageError);
  CHECK_THROWS_AS(twin(line(4), {5, {}}), DataError);
  CHECK_THROWS_AS(twin(line(4), {2, FixedIndex{4}}), DataError);
}

TEST_CASE("partition, cardinality and replay properties") {
  Gen gen(41);
  for (int t = 0; t < 150; ++t) {
    const auto n = gen.uniform(2, 250), d = gen.uniform(1, 5);
    const auto r = gen.uniform(2, std::min<std::size_t>(n, 12));
    Matrix m = t % 4 == 0 ? gen.lattice_matrix(n, d, 2) : gen.gaussian_matrix(n, d);
    const Dataset data = as_is(m);
    StartPolicy start = t % 3 == 0 ? StartPolicy{FarthestFromCentroid{}}
                                   : t % 3 == 1 ? StartPolicy{RandomStart{static_cast<std::uint64_t>(t)}}
                                                : StartPolicy{FixedIndex{gen.uniform(0, n - 1)}};
    const auto res = twin(data, {r, start});

    CHECK(res.d1.size() == (n + r - 1) / r);
    CHECK(res.subsets.size() == res.d1.size());
    std::vector<int> seen(n, 0);
    for (auto i : res.d1) ++seen[i];
    for (auto i : res.d2) ++seen[i];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    std::size_t covered = 0;
    for (const auto& s : res.subsets) covered += s.size();
    CHECK(covered == n);
    CHECK(res.subsets.front().front() == select_start(data, start));
    check_replay(m, res, r);

    const auto again = twin(data, {r, start});
    CHECK(again.subsets == res.subsets);
  }
}

TEST_CASE("twin_rows maps results back to parent rows") {
  const auto data = line(6);
  const IndexSet rows{1, 2, 4, 5};
  // Row 0 is not among the rows, so the run starts from its nearest member, row 1.
  auto res = twin_rows(data.values, rows, {2, FixedIndex{0}});
  CHECK(res.subsets == std::vector<IndexSet>{{1, 2}, {4, 5}});
  auto present = twin_rows(data.values, rows, {2, FixedIndex{5}});
  CHECK(present.subsets.front().front() == 5);
}
