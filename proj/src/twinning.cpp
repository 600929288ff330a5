#include "twinkit/twinning.hpp"

#include <cmath>

#include "twinkit/error.hpp"
#include "twinkit/masked_index.hpp"
#include "twinkit/random.hpp"

namespace twinkit {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double t = a[j] - b[j];
    s += t * t;
  }
  return s;
}

// Column means with compensated summation, so symmetric data yields an exact zero.
std::vector<double> centroid(const Matrix& points) {
  const std::size_t n = points.rows(), d = points.cols();
  std::vector<double> out(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = points(i, j);
      const double t = sum + x;
      comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    out[j] = (sum + comp) / static_cast<double>(n);
  }
  return out;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

RowIndex select_start(const Matrix& points, const StartPolicy& policy) {
  const std::size_t n = points.rows();
  if (n == 0) throw DataError("cannot pick a start point in an empty dataset");
  return std::visit(
      overloaded{
          [&](const FarthestFromCentroid&) {
            const auto c = centroid(points);
            RowIndex best = 0;
            double best_d2 = -1.0;
            for (RowIndex i = 0; i < n; ++i) {
              const double d2 = squared_distance(points.row(i), c);
              if (d2 > best_d2) {
                best_d2 = d2;
                best = i;
              }
            }
            return best;
          },
          [&](const FixedIndex& f) {
            if (f.row >= n) {
              throw DataError("start index " + std::to_string(f.row) + " out of range for " +
                              std::to_string(n) + " rows");
            }
            return f.row;
          },
          [&](const RandomStart& s) {
            Rng rng(s.seed);
            return static_cast<RowIndex>(rng.uniform_index(n));
          }},
      policy);
}

TwinResult twin(const Matrix& points, const TwinParams& params) {
  const std::size_t N = points.rows();
  const std::size_t r = params.r;
  if (r < 2) throw UsageError("r must be >= 2");
  if (r > N) {
    throw DataError("r = " + std::to_string(r) + " exceeds the number of rows (" +
                    std::to_string(N) + ")");
  }
  const std::size_t n = (N + r - 1) / r;

  MaskedIndex index(points);
  TwinResult out;
  out.d1.reserve(n);
  out.d2.reserve(N - n);
  out.subsets.reserve(n);

  RowIndex u = select_start(points, params.start);
  RowIndex previous_far = u;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) u = index.nearest(points.row(previous_far)).row;
    const std::size_t group = (i + 1 == n) ? index.alive_count() : r;
    index.mask(u);
    const auto neighbors = index.k_nearest(points.row(u), group - 1);

    IndexSet subset;
    subset.reserve(group);
    subset.push_back(u);
    out.d1.push_back(u);
    for (const auto& v : neighbors) {
      index.mask(v.row);
      subset.push_back(v.row);
      out.d2.push_back(v.row);
    }
    previous_far = subset.back();
    out.subsets.push_back(std::move(subset));
  }
  return out;
}

TwinResult twin_rows(const Matrix& points, std::span<const RowIndex> rows,
                     const TwinParams& params) {
  const Matrix local = points.gather(rows);
  TwinParams local_params = params;
  if (const auto* fixed = std::get_if<FixedIndex>(&params.start)) {
    if (fixed->row >= points.rows()) {
      throw DataError("start index " + std::to_string(fixed->row) + " out of range for " +
                      std::to_string(points.rows()) + " rows");
    }
    const auto target = points.row(fixed->row);
    std::size_t best = 0;
    double best_d2 = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[k] == fixed->row) {
        best = k;
        break;
      }
      const double d2 = squared_distance(points.row(rows[k]), target);
      if (k == 0 || d2 < best_d2 || (d2 == best_d2 && rows[k] < rows[best])) {
        best = k;
        best_d2 = d2;
      }
    }
    local_params.start = FixedIndex{best};
  }

  TwinResult result = twin(local, local_params);
  auto to_global = [&](IndexSet& ids) {
    for (auto& id : ids) id = rows[id];
  };
  to_global(result.d1);
  to_global(result.d2);
  for (auto& s : result.subsets) to_global(s);
  return result;
}

IndexSet twin_compress(const Dataset& data, const TwinParams& params) {
  return twin(data, params).d1;
}

}  // namespace twinkit
