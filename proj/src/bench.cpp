#include "twinkit/bench.hpp"

#include <chrono>

#include "twinkit/dataset.hpp"
#include "twinkit/energy.hpp"
#include "twinkit/error.hpp"
#include "twinkit/oracle.hpp"
#include "twinkit/parallel.hpp"
#include "twinkit/random.hpp"
#include "twinkit/twinning.hpp"

namespace twinkit {

std::vector<BenchRecord> run_bench(const BenchConfig& config) {
  if (config.r < 2) throw UsageError("r must be >= 2");
  if (config.reps == 0) throw UsageError("reps must be >= 1");
  const auto table =
      generate_mvn({config.n_rows, config.dim, derive_seed(config.seed, kDataStream, 0)});
  const Dataset data = standardize(table);
  if (config.r > data.rows()) throw DataError("r exceeds the number of rows");
  const std::size_t n_test = (data.rows() + config.r - 1) / config.r;

  using clock = std::chrono::steady_clock;
  auto elapsed_ms = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };
  auto base = [&](const char* method, std::size_t rep) {
    BenchRecord rec;
    rec.method = method;
    rec.rep = rep;
    rec.n_rows = data.rows();
    rec.dim = data.cols();
    rec.r = config.r;
    return rec;
  };

  std::vector<BenchRecord> twins(config.reps), randoms(config.reps);
  parallel_for(config.reps, [&](std::size_t i) {
    auto t0 = clock::now();
    const auto d1 =
        twin_compress(data, {config.r, RandomStart{derive_seed(config.seed, kStartStream, i)}});
    twins[i] = base("twinning", i);
    twins[i].wall_time_ms = elapsed_ms(t0);
    twins[i].energy_metric = energy_plot_metric(d1, data);

    t0 = clock::now();
    const auto pick =
        random_subset(data.rows(), n_test, derive_seed(config.seed, kRandomSplitStream, i));
    randoms[i] = base("random", i);
    randoms[i].wall_time_ms = elapsed_ms(t0);
    randoms[i].energy_metric = energy_plot_metric(pick, data);
  });

  std::vector<BenchRecord> out = std::move(twins);
  out.insert(out.end(), randoms.begin(), randoms.end());
  return out;
}

}  // namespace twinkit
