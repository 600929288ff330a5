#include "twinkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twinkit/energy.hpp"
#include "twinkit/error.hpp"
#include "twinkit/random.hpp"

namespace twinkit {

Matrix ar1_covariance(std::size_t dim, double rho) {
  Matrix s(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      s(i, j) = std::pow(rho, static_cast<double>(i > j ? i - j : j - i));
    }
  }
  return s;
}

Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DataError("cholesky needs a square matrix");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) throw DataError("matrix is not positive definite");
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

RawTable generate_mvn(const MvnSpec& spec) {
  if (spec.dim < 1) throw UsageError("dim must be >= 1");
  if (spec.n_rows < 2) throw UsageError("n_rows must be >= 2");
  const std::size_t d = spec.dim;
  const Matrix l = cholesky(ar1_covariance(d));
  Rng rng(spec.seed);
  RawTable out;
  out.values = Matrix(spec.n_rows, d);
  std::vector<double> z(d);
  for (std::size_t i = 0; i < spec.n_rows; ++i) {
    for (auto& v : z) v = rng.normal();
    auto row = out.values.row(i);
    for (std::size_t a = 0; a < d; ++a) {
      double s = 0.0;
      for (std::size_t b = 0; b <= a; ++b) s += l(a, b) * z[b];
      row[a] = s;
    }
  }
  for (std::size_t j = 0; j < d; ++j) out.column_names.push_back("x" + std::to_string(j + 1));
  return out;
}

RawTable generate_parabola(std::size_t n_rows, std::uint64_t seed) {
  if (n_rows < 2) throw UsageError("n_rows must be >= 2");
  Rng rng(seed);
  RawTable out;
  out.values = Matrix(n_rows, 2);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const double x = rng.normal();
    out.values(i, 0) = x;
    out.values(i, 1) = x * x + rng.normal();
  }
  out.column_names = {"x", "y"};
  return out;
}

namespace {

// C(n, k), or limit + 1 once it exceeds limit.
std::size_t bounded_binomial(std::size_t n, std::size_t k, std::size_t limit) {
  k = std::min(k, n - k);
  unsigned long long c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;  // exact: c * (n-k+i) is divisible by i at this step
    if (c > limit) return limit + 1;
  }
  return static_cast<std::size_t>(c);
}

}  // namespace

ExhaustiveResult exhaustive_search(const Dataset& data, std::size_t n) {
  const std::size_t N = data.rows();
  if (n == 0 || n >= N) {
    throw DataError("exhaustive search needs 1 <= n < N (n = " + std::to_string(n) +
                    ", N = " + std::to_string(N) + ")");
  }
  const std::size_t total = bounded_binomial(N, n, kMaxExhaustiveSubsets);
  if (total > kMaxExhaustiveSubsets) {
    throw DataError("C(" + std::to_string(N) + ", " + std::to_string(n) + ") exceeds the " +
                    std::to_string(kMaxExhaustiveSubsets) + "-subset enumeration guard");
  }

  ExhaustiveResult out;
  std::vector<double> energies;
  energies.reserve(total);
  IndexSet current(n);
  std::iota(current.begin(), current.end(), RowIndex{0});
  for (;;) {
    const double e = energy_full(current, data);
    energies.push_back(e);
    if (out.best.empty() || e < out.best_energy) {
      out.best = current;
      out.best_energy = e;
    }
    // Next combination in lexicographic order.
    std::size_t i = n;
    while (i > 0 && current[i - 1] == N - n + (i - 1)) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::size_t j = i; j < n; ++j) current[j] = current[j - 1] + 1;
  }
  out.evaluated = energies.size();
  out.median_energy = median(std::move(energies));
  return out;
}

std::pair<IndexSet, double> exhaustive_best_subset(const Dataset& data, std::size_t n) {
  auto r = exhaustive_search(data, n);
  return {std::move(r.best), r.best_energy};
}

std::vector<Neighbor> linear_scan_nn(const Matrix& points, std::span<const std::uint8_t> masked,
                                     std::span<const double> query, std::size_t k) {
  if (masked.size() != points.rows()) throw DataError("mask length does not match the data");
  struct Hit {
    double d2;
    RowIndex row;
  };
  std::vector<Hit> hits;
  for (RowIndex i = 0; i < points.rows(); ++i) {
    if (masked[i]) continue;
    auto p = points.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double t = p[j] - query[j];
      s += t * t;
    }
    hits.push_back({s, i});
  }
  if (hits.size() < k) {
    throw DataError("requested " + std::to_string(k) + " neighbors but only " +
                    std::to_string(hits.size()) + " points are unmasked");
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.d2 < b.d2 || (a.d2 == b.d2 && a.row < b.row);
  });
  std::vector<Neighbor> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({hits[i].row, std::sqrt(hits[i].d2)});
  return out;
}

IndexSet random_subset(std::size_t n_rows, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  return rng.sample_without_replacement(n_rows, count);
}

std::vector<IndexSet> random_folds(std::size_t n_rows, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n_rows) throw UsageError("random_folds needs 2 <= k <= N");
  Rng rng(seed);
  const auto perm = rng.sample_without_replacement(n_rows, n_rows);
  std::vector<IndexSet> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n_rows / k + (f < n_rows % k ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

RankSumResult rank_sum_test(std::span<const double> x, std::span<const double> y) {
  const std::size_t n1 = x.size(), n2 = y.size(), n = n1 + n2;
  if (n1 == 0 || n2 == 0) throw UsageError("rank-sum test needs two non-empty samples");
  struct Obs {
    double v;
    bool first;
  };
  std::vector<Obs> all;
  all.reserve(n);
  for (double v : x) all.push_back({v, true});
  for (double v : y) all.push_back({v, false});
  std::sort(all.begin(), all.end(), [](const Obs& a, const Obs& b) { return a.v < b.v; });

  double rank_sum = 0.0, tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j].v == all[i].v) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].first) rank_sum += avg_rank;
    }
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double a = static_cast<double>(n1), b = static_cast<double>(n2), m = static_cast<double>(n);
  RankSumResult r;
  r.u = rank_sum - a * (a + 1.0) / 2.0;
  const double mu = a * b / 2.0;
  const double var = a * b / 12.0 * ((m + 1.0) - tie_term / (m * (m - 1.0)));
  if (var <= 0.0) {
    r.z = 0.0;
    r.p_less = 1.0;
    return r;
  }
  r.z = (r.u - mu + 0.5) / std::sqrt(var);
  r.p_less = 0.5 * std::erfc(-r.z / std::sqrt(2.0));
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) throw UsageError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw UsageError("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace twinkit
