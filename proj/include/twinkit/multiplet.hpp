#pragma once

#include <string>
#include <vector>

#include "twinkit/dataset.hpp"
#include "twinkit/twinning.hpp"

namespace twinkit {

enum class Strategy { s1, s2, s3 };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

struct MultipletResult {
  std::vector<IndexSet> folds;
  Strategy strategy = Strategy::s1;
  std::vector<double> per_fold_energy;  // energy_plot_metric of each fold against all rows
  double max_energy = 0.0;
};

/// Start policy for the `ordinal`-th twinning run inside a multiplet. RandomStart
/// seeds become seed + ordinal; other policies are reused as given.
StartPolicy sub_run_start(const StartPolicy& start, std::size_t ordinal);

/// S1: twin with r = k, k-1, ..., 2 on the shrinking remainder. Fold i is the small
/// twin of run i; the last remainder is fold k. Run ordinal i uses sub_run_start(start, i).
MultipletResult multiplet_s1(const Dataset& data, std::size_t k, const StartPolicy& start);

/// S1 with caller-chosen r for each run: folds are the small twins of runs with
/// ratios[0], ratios[1], ... followed by the final remainder.
MultipletResult multiplet_s1_ratios(const Dataset& data, const std::vector<std::size_t>& ratios,
                                    const StartPolicy& start);

/// S2: recursive halving with r = 2 to depth log2(k). The run at heap position p
/// (root 0, children 2p+1 and 2p+2) uses sub_run_start(start, p). Folds are the leaves
/// left to right, the small twin on the left.
MultipletResult multiplet_s2(const Dataset& data, std::size_t k, const StartPolicy& start);

/// S3: one twinning run with r = k; member j of every group goes to fold j.
MultipletResult multiplet_s3(const Dataset& data, std::size_t k, const StartPolicy& start);

MultipletResult make_multiplets(const Dataset& data, Strategy strategy, std::size_t k,
                                const StartPolicy& start);

/// Largest energy_plot_metric over the folds, which must partition the rows.
double max_energy(const std::vector<IndexSet>& folds, const Dataset& data);

/// Per-fold energy_plot_metric; validates that the folds partition the rows.
std::vector<double> fold_energies(const std::vector<IndexSet>& folds, const Dataset& data);

}  // namespace twinkit
