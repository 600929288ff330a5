#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twinkit {

struct BenchConfig {
  std::size_t n_rows = 1000;
  std::size_t dim = 4;
  std::size_t r = 5;
  std::size_t reps = 50;
  std::uint64_t seed = 0;
};

struct BenchRecord {
  std::string method;  // "twinning" or "random"
  std::size_t rep = 0;
  std::size_t n_rows = 0;
  std::size_t dim = 0;
  std::size_t r = 0;
  double wall_time_ms = 0.0;
  double energy_metric = 0.0;
};

/// Seed streams used by the benchmark, all derived from the master seed.
enum BenchStream : std::uint64_t { kDataStream = 0, kStartStream = 1, kRandomSplitStream = 2 };

/// One MVN dataset from derive_seed(seed, kDataStream, 0), standardized. Replication i
/// twins it from RandomStart{derive_seed(seed, kStartStream, i)} and draws a uniform
/// subset of the same size from derive_seed(seed, kRandomSplitStream, i). Records come
/// back twinning first, then random, each ordered by replication.
std::vector<BenchRecord> run_bench(const BenchConfig& config);

}  // namespace twinkit
