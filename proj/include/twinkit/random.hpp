#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace twinkit {

/// Seeded generator with fully specified output.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++ standard. The
/// distributions are implemented here rather than taken from <random>, whose
/// algorithms vary between standard libraries:
///  - uniform01: top 53 bits of one draw, scaled by 2^-53.
///  - uniform_index: rejection sampling on 64-bit draws (no modulo bias).
///  - normal: Marsaglia polar method, caching the second variate.
class Rng {
public:
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  std::uint64_t uniform_index(std::uint64_t n);
  double normal();

  /// First `count` entries of a Fisher-Yates shuffle of [0, n).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent stream seeds: derive_seed(master, stream, ordinal) hashes the triple
/// through mix64 so distinct (stream, ordinal) pairs give unrelated generators.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t ordinal);

}  // namespace twinkit
