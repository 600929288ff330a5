#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "twinkit/dataset.hpp"

namespace twinkit {

/// First point u1 of a twinning run.
struct FarthestFromCentroid {};
struct FixedIndex {
  RowIndex row = 0;
};
struct RandomStart {
  std::uint64_t seed = 0;
};
using StartPolicy = std::variant<FarthestFromCentroid, FixedIndex, RandomStart>;

struct TwinParams {
  std::size_t r = 2;  // inverse splitting ratio; one in every r rows goes to d1
  StartPolicy start = FarthestFromCentroid{};
};

struct TwinResult {
  IndexSet d1;                        // u_1 .. u_n in selection order
  IndexSet d2;                        // v's in selection order
  std::vector<IndexSet> subsets;      // S_i = (u_i, v_i^1, ..., ascending distance from u_i)
};

/// Row picked by `policy`. FarthestFromCentroid uses standardized coordinates and the
/// lowest index on ties; RandomStart draws uniformly from Rng(seed).
RowIndex select_start(const Matrix& points, const StartPolicy& policy);
inline RowIndex select_start(const Dataset& data, const StartPolicy& policy) {
  return select_start(data.values, policy);
}

/// Sequential nearest-neighbor twinning of `points` into ceil(N/r) groups.
///
/// Group i takes u_i and its r-1 nearest unmasked neighbors; u_i goes to d1, the
/// neighbors to d2, and the whole group is masked. For i > 1, u_i is the unmasked
/// point nearest the farthest member of group i-1. The last group takes whatever
/// remains. Indices refer to rows of `points`.
TwinResult twin(const Matrix& points, const TwinParams& params);
inline TwinResult twin(const Dataset& data, const TwinParams& params) {
  return twin(data.values, params);
}

/// Twinning restricted to `rows` of `points`; result indices are rows of `points`.
/// FixedIndex names a row of `points`; if it is not among `rows`, the run starts from
/// the member of `rows` closest to it.
TwinResult twin_rows(const Matrix& points, std::span<const RowIndex> rows, const TwinParams& params);

/// The ceil(N/r)-row twin alone, for compressing a large dataset.
IndexSet twin_compress(const Dataset& data, const TwinParams& params);

}  // namespace twinkit
