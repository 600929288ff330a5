#include "twinkit/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twinkit/error.hpp"
#include "twinkit/parallel.hpp"

namespace twinkit {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return std::sqrt(s);
}

// Neumaier compensated sum.
class Accumulator {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double ordered_sum(const std::vector<double>& xs) {
  Accumulator acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

// Sorted copy; sorting makes every estimator independent of the caller's ordering.
IndexSet checked_sorted(std::span<const RowIndex> ids, std::size_t n_rows, const char* what) {
  IndexSet out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  if (out.empty()) throw DataError(std::string(what) + " is empty");
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw DataError(std::string(what) + " contains a duplicate row index");
  }
  if (out.back() >= n_rows) {
    throw DataError(std::string(what) + " contains row " + std::to_string(out.back()) +
                    " but the data has " + std::to_string(n_rows) + " rows");
  }
  return out;
}

IndexSet checked_proper_subset(std::span<const RowIndex> subset, std::size_t n_rows) {
  auto s = checked_sorted(subset, n_rows, "subset");
  if (s.size() >= n_rows) throw DataError("subset covers every row; it must be a proper subset");
  return s;
}

// Sum over all ordered pairs of `ids` (i == j included as zeros).
double self_distance_sum(const Matrix& points, std::span<const RowIndex> ids) {
  std::vector<double> partial(ids.size(), 0.0);
  parallel_for(ids.size(), [&](std::size_t i) {
    auto a = points.row(ids[i]);
    Accumulator s;
    for (std::size_t j = i + 1; j < ids.size(); ++j) s.add(distance(a, points.row(ids[j])));
    partial[i] = s.value();
  });
  return 2.0 * ordered_sum(partial);
}

IndexSet all_rows(std::size_t n) {
  IndexSet out(n);
  std::iota(out.begin(), out.end(), RowIndex{0});
  return out;
}

}  // namespace

double cross_distance_sum(const Matrix& points, std::span<const RowIndex> a,
                          std::span<const RowIndex> b) {
  std::vector<double> partial(a.size(), 0.0);
  parallel_for(a.size(), [&](std::size_t i) {
    auto p = points.row(a[i]);
    Accumulator s;
    for (auto j : b) s.add(distance(p, points.row(j)));
    partial[i] = s.value();
  });
  return ordered_sum(partial);
}

IndexSet complement(std::span<const RowIndex> subset, std::size_t n_rows) {
  auto s = checked_sorted(subset, n_rows, "subset");
  IndexSet out;
  out.reserve(n_rows - s.size());
  std::size_t k = 0;
  for (RowIndex i = 0; i < n_rows; ++i) {
    if (k < s.size() && s[k] == i) {
      ++k;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

double energy_plot_metric(std::span<const RowIndex> subset, const Dataset& data) {
  const auto u = checked_proper_subset(subset, data.rows());
  const auto z = all_rows(data.rows());
  const double n = static_cast<double>(u.size());
  const double N = static_cast<double>(data.rows());
  return 2.0 / (n * N) * cross_distance_sum(data.values, u, z) -
         self_distance_sum(data.values, u) / (n * n);
}

double energy_full(std::span<const RowIndex> subset, const Dataset& data) {
  const auto u = checked_proper_subset(subset, data.rows());
  const auto z = all_rows(data.rows());
  const double n = static_cast<double>(u.size());
  const double N = static_cast<double>(data.rows());
  return 2.0 / (n * N) * cross_distance_sum(data.values, u, z) -
         self_distance_sum(data.values, u) / (n * n) -
         self_distance_sum(data.values, z) / (N * N);
}

double energy_between(std::span<const RowIndex> part_a, std::span<const RowIndex> part_b,
                      const Dataset& data) {
  const auto a = checked_sorted(part_a, data.rows(), "part_a");
  const auto b = checked_sorted(part_b, data.rows(), "part_b");
  IndexSet both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  if (!both.empty()) {
    throw DataError("parts overlap at row " + std::to_string(both.front()));
  }
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  return 2.0 / (n * m) * cross_distance_sum(data.values, a, b) -
         self_distance_sum(data.values, a) / (n * n) -
         self_distance_sum(data.values, b) / (m * m);
}

EnergyReport energy_report(std::span<const RowIndex> subset, const Dataset& data) {
  EnergyReport r;
  r.full = energy_full(subset, data);
  r.between = energy_between(subset, complement(subset, data.rows()), data);
  r.plot_metric = energy_plot_metric(subset, data);
  r.n = subset.size();
  r.N = data.rows();
  return r;
}

IdentityCheck verify_proposition1(std::span<const RowIndex> part_a, const Dataset& data) {
  IdentityCheck c;
  c.lhs = energy_full(part_a, data);
  const double shrink = 1.0 - static_cast<double>(part_a.size()) / static_cast<double>(data.rows());
  c.rhs = shrink * shrink * energy_between(part_a, complement(part_a, data.rows()), data);
  c.relative_gap = std::abs(c.lhs - c.rhs) / std::max(std::abs(c.lhs), 1e-300);
  return c;
}

}  // namespace twinkit
