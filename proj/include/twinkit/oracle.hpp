#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "twinkit/dataset.hpp"
#include "twinkit/masked_index.hpp"

namespace twinkit {

/// Zero-mean multivariate normal with covariance 0.5^|i-j|.
struct MvnSpec {
  std::size_t n_rows = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
};

/// Covariance matrix with entries 0.5^|i-j|, row-major dim x dim.
Matrix ar1_covariance(std::size_t dim, double rho = 0.5);

/// Lower-triangular L with L L^T = a. Throws DataError if `a` is not positive definite.
Matrix cholesky(const Matrix& a);

/// Rows are L z with z from Rng(seed).normal(), drawn row by row, coordinate by coordinate.
RawTable generate_mvn(const MvnSpec& spec);

/// Two columns: x ~ N(0,1), y | x ~ N(x^2, 1). Each row draws x then the noise on y.
RawTable generate_parabola(std::size_t n_rows, std::uint64_t seed);

struct ExhaustiveResult {
  IndexSet best;               // lexicographically smallest among the minimizers
  double best_energy = 0.0;    // energy_full(best)
  double median_energy = 0.0;  // median of energy_full over every n-subset
  std::size_t evaluated = 0;
};

inline constexpr std::size_t kMaxExhaustiveSubsets = 1'000'000;

/// Minimizes energy_full over all n-subsets by enumeration in lexicographic order.
/// Throws DataError when C(N, n) exceeds kMaxExhaustiveSubsets or n is not in [1, N).
ExhaustiveResult exhaustive_search(const Dataset& data, std::size_t n);

/// (best subset, its energy_full).
std::pair<IndexSet, double> exhaustive_best_subset(const Dataset& data, std::size_t n);

/// Brute-force k nearest unmasked rows, ascending by (distance, row). masked[i] != 0
/// excludes row i.
std::vector<Neighbor> linear_scan_nn(const Matrix& points, std::span<const std::uint8_t> masked,
                                     std::span<const double> query, std::size_t k);

/// Uniformly random subset of size `count`, in draw order.
IndexSet random_subset(std::size_t n_rows, std::size_t count, std::uint64_t seed);

/// Uniformly random k-way split with fold sizes ceil/floor(N/k), largest folds first.
std::vector<IndexSet> random_folds(std::size_t n_rows, std::size_t k, std::uint64_t seed);

struct RankSumResult {
  double u = 0.0;        // Mann-Whitney U of the first sample
  double z = 0.0;
  double p_less = 0.0;   // one-sided p for "first sample tends to be smaller"
};

/// Wilcoxon rank-sum test, normal approximation with tie and continuity corrections.
RankSumResult rank_sum_test(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);
double mean(std::span<const double> values);

}  // namespace twinkit
