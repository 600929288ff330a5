#pragma once

#include <span>

#include "twinkit/dataset.hpp"

namespace twinkit {

/// Empirical energy-distance estimators over standardized coordinates.
///
/// With U the subset (size n), V its complement (size N - n) and Z the whole data:
///   full        = 2/(nN) sum|U-Z| - 1/n^2 sum|U-U| - 1/N^2 sum|Z-Z|
///   between     = 2/(n m) sum|U-V| - 1/n^2 sum|U-U| - 1/m^2 sum|V-V|
///   plot_metric = 2/(nN) sum|U-Z| - 1/n^2 sum|U-U|
/// Double sums include the zero i == j terms.
struct EnergyReport {
  double full = 0.0;
  double between = 0.0;
  double plot_metric = 0.0;
  std::size_t n = 0;
  std::size_t N = 0;
};

double energy_full(std::span<const RowIndex> subset, const Dataset& data);
double energy_between(std::span<const RowIndex> part_a, std::span<const RowIndex> part_b,
                      const Dataset& data);
double energy_plot_metric(std::span<const RowIndex> subset, const Dataset& data);

/// All three estimators for `subset` against its complement.
EnergyReport energy_report(std::span<const RowIndex> subset, const Dataset& data);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_gap = 0.0;
};

/// lhs = energy_full(part_a); rhs = (1 - n/N)^2 * energy_between(part_a, complement).
IdentityCheck verify_proposition1(std::span<const RowIndex> part_a, const Dataset& data);

/// Sorted complement of `subset` within [0, n_rows). Validates the subset.
IndexSet complement(std::span<const RowIndex> subset, std::size_t n_rows);

/// Sum over a in A, b in B of |a - b|, reduced in row order of A.
double cross_distance_sum(const Matrix& points, std::span<const RowIndex> a,
                          std::span<const RowIndex> b);

}  // namespace twinkit
