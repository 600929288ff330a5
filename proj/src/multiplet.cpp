#include "twinkit/multiplet.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "twinkit/energy.hpp"
#include "twinkit/error.hpp"
#include "twinkit/parallel.hpp"

namespace twinkit {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::s1: return "s1";
    case Strategy::s2: return "s2";
    case Strategy::s3: return "s3";
  }
  return "?";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "s1" || name == "S1") return Strategy::s1;
  if (name == "s2" || name == "S2") return Strategy::s2;
  if (name == "s3" || name == "S3") return Strategy::s3;
  throw UsageError("unknown strategy '" + name + "' (expected s1, s2 or s3)");
}

StartPolicy sub_run_start(const StartPolicy& start, std::size_t ordinal) {
  if (const auto* rs = std::get_if<RandomStart>(&start)) return RandomStart{rs->seed + ordinal};
  return start;
}

namespace {

IndexSet all_rows(std::size_t n) {
  IndexSet out(n);
  std::iota(out.begin(), out.end(), RowIndex{0});
  return out;
}

void check_k(std::size_t k, std::size_t n_rows) {
  if (k < 2) throw UsageError("k must be >= 2");
  if (k > n_rows) {
    throw DataError("k = " + std::to_string(k) + " exceeds the number of rows (" +
                    std::to_string(n_rows) + ")");
  }
}

MultipletResult finish(std::vector<IndexSet> folds, Strategy strategy, const Dataset& data) {
  MultipletResult out;
  out.folds = std::move(folds);
  out.strategy = strategy;
  out.per_fold_energy = fold_energies(out.folds, data);
  out.max_energy = *std::max_element(out.per_fold_energy.begin(), out.per_fold_energy.end());
  return out;
}

void halve(const Matrix& points, const IndexSet& rows, std::size_t depth, std::size_t position,
           const StartPolicy& start, std::vector<IndexSet>& leaves, std::size_t leaf_offset) {
  if (depth == 0) {
    leaves[leaf_offset] = rows;
    return;
  }
  auto split = twin_rows(points, rows, {2, sub_run_start(start, position)});
  const std::size_t half = std::size_t{1} << (depth - 1);
  // Children touch disjoint leaves and disjoint rows.
  std::exception_ptr failure;
  auto right = [&] {
    try {
      halve(points, split.d2, depth - 1, 2 * position + 2, start, leaves, leaf_offset + half);
    } catch (...) {
      failure = std::current_exception();
    }
  };
  if (depth >= 2 && thread_count() > 1) {
    std::thread worker(right);
    halve(points, split.d1, depth - 1, 2 * position + 1, start, leaves, leaf_offset);
    worker.join();
  } else {
    halve(points, split.d1, depth - 1, 2 * position + 1, start, leaves, leaf_offset);
    right();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

MultipletResult multiplet_s1_ratios(const Dataset& data, const std::vector<std::size_t>& ratios,
                                    const StartPolicy& start) {
  if (ratios.empty()) throw UsageError("S1 needs at least one ratio");
  IndexSet remaining = all_rows(data.rows());
  std::vector<IndexSet> folds;
  folds.reserve(ratios.size() + 1);
  for (std::size_t run = 0; run < ratios.size(); ++run) {
    if (ratios[run] < 2) throw UsageError("every S1 ratio must be >= 2");
    if (ratios[run] > remaining.size()) {
      throw DataError("S1 run " + std::to_string(run + 1) + " needs r = " +
                      std::to_string(ratios[run]) + " but only " + std::to_string(remaining.size()) +
                      " rows remain");
    }
    auto split = twin_rows(data.values, remaining, {ratios[run], sub_run_start(start, run)});
    folds.push_back(std::move(split.d1));
    remaining = std::move(split.d2);
  }
  folds.push_back(std::move(remaining));
  return finish(std::move(folds), Strategy::s1, data);
}

MultipletResult multiplet_s1(const Dataset& data, std::size_t k, const StartPolicy& start) {
  check_k(k, data.rows());
  std::vector<std::size_t> ratios;
  for (std::size_t r = k; r >= 2; --r) ratios.push_back(r);
  return multiplet_s1_ratios(data, ratios, start);
}

MultipletResult multiplet_s2(const Dataset& data, std::size_t k, const StartPolicy& start) {
  if (k < 2 || (k & (k - 1)) != 0) throw UsageError("k must be a power of 2 for S2");
  check_k(k, data.rows());
  std::size_t depth = 0;
  while ((std::size_t{1} << depth) < k) ++depth;
  std::vector<IndexSet> leaves(k);
  halve(data.values, all_rows(data.rows()), depth, 0, start, leaves, 0);
  return finish(std::move(leaves), Strategy::s2, data);
}

MultipletResult multiplet_s3(const Dataset& data, std::size_t k, const StartPolicy& start) {
  check_k(k, data.rows());
  const auto result = twin(data, {k, start});
  std::vector<IndexSet> folds(k);
  for (const auto& group : result.subsets) {
    for (std::size_t j = 0; j < group.size(); ++j) folds[j].push_back(group[j]);
  }
  return finish(std::move(folds), Strategy::s3, data);
}

MultipletResult make_multiplets(const Dataset& data, Strategy strategy, std::size_t k,
                                const StartPolicy& start) {
  switch (strategy) {
    case Strategy::s1: return multiplet_s1(data, k, start);
    case Strategy::s2: return multiplet_s2(data, k, start);
    case Strategy::s3: return multiplet_s3(data, k, start);
  }
  throw UsageError("unknown strategy");
}

std::vector<double> fold_energies(const std::vector<IndexSet>& folds, const Dataset& data) {
  std::vector<std::uint8_t> seen(data.rows(), 0);
  std::size_t covered = 0;
  for (const auto& fold : folds) {
    for (auto i : fold) {
      if (i >= data.rows()) throw DataError("fold row " + std::to_string(i) + " out of range");
      if (seen[i]) throw DataError("row " + std::to_string(i) + " appears in more than one fold");
      seen[i] = 1;
      ++covered;
    }
  }
  if (covered != data.rows()) {
    throw DataError("folds cover " + std::to_string(covered) + " of " +
                    std::to_string(data.rows()) + " rows");
  }
  std::vector<double> out;
  out.reserve(folds.size());
  for (const auto& fold : folds) out.push_back(energy_plot_metric(fold, data));
  return out;
}

double max_energy(const std::vector<IndexSet>& folds, const Dataset& data) {
  const auto e = fold_energies(folds, data);
  if (e.empty()) throw DataError("no folds given");
  return *std::max_element(e.begin(), e.end());
}

}  // namespace twinkit
