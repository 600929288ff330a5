#include "twinkit/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "twinkit/bench.hpp"
#include "twinkit/dataset.hpp"
#include "twinkit/energy.hpp"
#include "twinkit/error.hpp"
#include "twinkit/multiplet.hpp"
#include "twinkit/twinning.hpp"

namespace twinkit::cli {

namespace {

using json = nlohmann::ordered_json;
using clock = std::chrono::steady_clock;

struct InputOptions {
  std::string input;
  std::vector<std::string> columns;
  std::string constant_columns = "reject";
  bool no_standardize = false;
};

struct StartOptions {
  std::string start;
  std::optional<std::uint64_t> seed;
};

void add_input(CLI::App& cmd, InputOptions& o) {
  cmd.add_option("--input", o.input, "CSV file with a header row")->required();
  cmd.add_option("--columns", o.columns, "Columns to use (default: all)")->delimiter(',');
  cmd.add_option("--constant-columns", o.constant_columns, "reject | zero")
      ->check(CLI::IsMember({"reject", "zero"}));
  cmd.add_flag("--no-standardize", o.no_standardize,
               "Use values as given (toy or pre-scaled data)");
}

void add_start(CLI::App& cmd, StartOptions& o) {
  cmd.add_option("--start", o.start, "farthest | index=<row> | random");
  cmd.add_option("--seed", o.seed, "Seed for random starts");
}

StartPolicy parse_start(const StartOptions& o) {
  if (o.start.empty()) {
    if (o.seed) return RandomStart{*o.seed};
    return FarthestFromCentroid{};
  }
  if (o.start == "farthest") return FarthestFromCentroid{};
  if (o.start == "random") {
    if (!o.seed) throw UsageError("--start random requires --seed");
    return RandomStart{*o.seed};
  }
  if (o.start.rfind("index=", 0) == 0) {
    const auto text = o.start.substr(6);
    std::size_t pos = 0;
    unsigned long long row = 0;
    try {
      row = std::stoull(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (text.empty() || pos != text.size() || text.front() == '-') {
      throw UsageError("bad --start value '" + o.start + "'");
    }
    return FixedIndex{static_cast<RowIndex>(row)};
  }
  throw UsageError("bad --start value '" + o.start + "' (expected farthest, index=<row> or random)");
}

struct Loaded {
  RawTable table;
  Dataset data;
};

Loaded load(const InputOptions& o) {
  Loaded l;
  std::optional<std::vector<std::string>> selection;
  if (!o.columns.empty()) selection = o.columns;
  l.table = load_csv(o.input, selection);
  const auto policy =
      o.constant_columns == "zero" ? ConstantColumnPolicy::zero : ConstantColumnPolicy::reject;
  l.data = o.no_standardize ? as_is(l.table) : standardize(l.table, policy);
  return l;
}

std::string default_prefix(const std::string& input) {
  std::filesystem::path p(input);
  return (p.parent_path() / p.stem()).string();
}

double ms_since(clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
}

IndexSet sorted(IndexSet ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Writes every file to a temp name first; nothing is renamed until all writes succeed.
void write_all(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::filesystem::path> temps;
  try {
    for (const auto& [path, contents] : files) {
      std::filesystem::path tmp = path + ".partial";
      write_file_atomic(tmp, contents);
      temps.push_back(tmp);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    std::filesystem::rename(temps[i], files[i].first, ec);
    if (ec) throw IoError("cannot write '" + files[i].first + "'");
  }
}

struct SplitOptions {
  InputOptions in;
  StartOptions start;
  long long r = 0;
  std::string train, test, out_prefix;
  bool emit_indices = false;
  bool skip_energy = false;
  bool no_timing = false;
};

int cmd_split(const SplitOptions& o, std::ostream& out) {
  if (o.r < 2) throw UsageError("r must be ≥ 2");
  const auto policy = parse_start(o.start);
  const auto loaded = load(o.in);

  const auto t0 = clock::now();
  const auto result = twin(loaded.data, {static_cast<std::size_t>(o.r), policy});
  const double wall = ms_since(t0);

  const auto test_rows = sorted(result.d1);
  const auto train_rows = sorted(result.d2);
  const std::string prefix = o.out_prefix.empty() ? default_prefix(o.in.input) : o.out_prefix;
  std::vector<std::pair<std::string, std::string>> files;
  if (o.emit_indices) {
    files.emplace_back(o.train.empty() ? prefix + "_train.idx" : o.train, format_index_list(train_rows));
    files.emplace_back(o.test.empty() ? prefix + "_test.idx" : o.test, format_index_list(test_rows));
  } else {
    files.emplace_back(o.train.empty() ? prefix + "_train.csv" : o.train,
                       format_csv(loaded.table, train_rows));
    files.emplace_back(o.test.empty() ? prefix + "_test.csv" : o.test,
                       format_csv(loaded.table, test_rows));
  }

  json report;
  report["N"] = loaded.data.rows();
  report["d"] = loaded.data.cols();
  report["r"] = o.r;
  report["n_test"] = test_rows.size();
  report["energy_metric"] = o.skip_energy ? json(nullptr) : json(energy_plot_metric(test_rows, loaded.data));
  report["wall_time_ms"] = o.no_timing ? json(nullptr) : json(wall);
  write_all(files);
  out << report.dump() << '\n';
  return kOk;
}

struct FoldOptions {
  InputOptions in;
  StartOptions start;
  long long k = 0;
  std::string strategy;
  std::vector<long long> ratios;
  std::string out_prefix;
};

int cmd_fold(const FoldOptions& o, std::ostream& out) {
  const Strategy strategy = parse_strategy(o.strategy);
  if (!o.ratios.empty() && strategy != Strategy::s1) {
    throw UsageError("--ratios is only supported with strategy s1");
  }
  std::vector<std::size_t> ratios;
  for (auto r : o.ratios) {
    if (r < 2) throw UsageError("every ratio must be ≥ 2");
    ratios.push_back(static_cast<std::size_t>(r));
  }
  if (ratios.empty()) {
    if (o.k < 2) throw UsageError("k must be ≥ 2");
    if (strategy == Strategy::s2 && (o.k & (o.k - 1)) != 0) {
      throw UsageError("k must be a power of 2 for S2");
    }
  } else if (o.k != 0 && static_cast<std::size_t>(o.k) != ratios.size() + 1) {
    throw UsageError("--k must equal the number of ratios plus one");
  }
  const auto policy = parse_start(o.start);
  const auto loaded = load(o.in);

  const auto result = ratios.empty()
                          ? make_multiplets(loaded.data, strategy, static_cast<std::size_t>(o.k), policy)
                          : multiplet_s1_ratios(loaded.data, ratios, policy);

  const std::string prefix = o.out_prefix.empty() ? default_prefix(o.in.input) : o.out_prefix;
  std::vector<std::pair<std::string, std::string>> files;
  json sizes = json::array();
  for (std::size_t i = 0; i < result.folds.size(); ++i) {
    files.emplace_back(prefix + "_fold" + std::to_string(i + 1) + ".idx",
                       format_index_list(sorted(result.folds[i])));
    sizes.push_back(result.folds[i].size());
  }
  json summary;
  summary["strategy"] = to_string(result.strategy);
  summary["k"] = result.folds.size();
  summary["fold_sizes"] = sizes;
  summary["per_fold_energy"] = result.per_fold_energy;
  summary["max_energy"] = result.max_energy;
  const auto text = summary.dump();
  files.emplace_back(prefix + "_summary.json", text + "\n");
  write_all(files);
  out << text << '\n';
  return kOk;
}

struct EnergyOptions {
  InputOptions in;
  std::string subset;
};

int cmd_energy(const EnergyOptions& o, std::ostream& out) {
  const auto loaded = load(o.in);
  const auto subset = read_index_file(o.subset);
  if (subset.empty()) throw DataError("subset index file '" + o.subset + "' is empty");
  const auto report = energy_report(subset, loaded.data);
  const auto check = verify_proposition1(subset, loaded.data);
  json j;
  j["energy_full"] = report.full;
  j["energy_between"] = report.between;
  j["energy_plot_metric"] = report.plot_metric;
  j["prop1_relative_gap"] = check.relative_gap;
  out << j.dump() << '\n';
  return kOk;
}

struct BenchOptions {
  long long n = 1000, d = 4, r = 5, reps = 50;
  std::uint64_t seed = 0;
  bool no_timing = false;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  if (o.n < 2) throw UsageError("n must be ≥ 2");
  if (o.d < 1) throw UsageError("d must be ≥ 1");
  if (o.r < 2) throw UsageError("r must be ≥ 2");
  if (o.reps < 1) throw UsageError("reps must be ≥ 1");
  BenchConfig config;
  config.n_rows = static_cast<std::size_t>(o.n);
  config.dim = static_cast<std::size_t>(o.d);
  config.r = static_cast<std::size_t>(o.r);
  config.reps = static_cast<std::size_t>(o.reps);
  config.seed = o.seed;
  for (const auto& rec : run_bench(config)) {
    json j;
    j["method"] = rec.method;
    j["rep"] = rec.rep;
    j["N"] = rec.n_rows;
    j["d"] = rec.dim;
    j["r"] = rec.r;
    j["wall_time_ms"] = o.no_timing ? json(nullptr) : json(rec.wall_time_ms);
    j["energy_metric"] = rec.energy_metric;
    out << j.dump() << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Split tabular data into statistically similar twins and folds"};
  app.name("twinkit");
  app.require_subcommand(1);

  SplitOptions split;
  auto* split_cmd = app.add_subcommand("split", "Train/test split; the test set holds one row in every r");
  add_input(*split_cmd, split.in);
  add_start(*split_cmd, split.start);
  split_cmd->add_option("--r", split.r, "Inverse splitting ratio (5 gives 80-20)")->required();
  split_cmd->add_option("--train", split.train, "Output path for the larger twin");
  split_cmd->add_option("--test", split.test, "Output path for the smaller twin");
  split_cmd->add_option("--out-prefix", split.out_prefix, "Prefix for default output names");
  split_cmd->add_flag("--emit-indices", split.emit_indices, "Write row-index files instead of CSV");
  split_cmd->add_flag("--skip-energy", split.skip_energy, "Do not compute the energy metric");
  split_cmd->add_flag("--no-timing", split.no_timing, "Report wall_time_ms as null");

  FoldOptions fold;
  auto* fold_cmd = app.add_subcommand("fold", "k statistically similar folds");
  add_input(*fold_cmd, fold.in);
  add_start(*fold_cmd, fold.start);
  fold_cmd->add_option("--k", fold.k, "Number of folds");
  fold_cmd->add_option("--strategy", fold.strategy, "s1 | s2 | s3")->required();
  fold_cmd->add_option("--ratios", fold.ratios, "S1 only: r for each run, comma separated")
      ->delimiter(',');
  fold_cmd->add_option("--out-prefix", fold.out_prefix, "Prefix for <prefix>_fold<i>.idx");

  EnergyOptions energy;
  auto* energy_cmd = app.add_subcommand("energy", "Energy distances of a subset against the rest");
  add_input(*energy_cmd, energy.in);
  energy_cmd->add_option("--subset", energy.subset, "Index file of the subset")->required();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Twinning vs random splits on synthetic MVN data");
  bench_cmd->add_option("--n", bench.n, "Rows");
  bench_cmd->add_option("--d", bench.d, "Dimension");
  bench_cmd->add_option("--r", bench.r, "Inverse splitting ratio");
  bench_cmd->add_option("--reps", bench.reps, "Replications");
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Report wall_time_ms as null");

  std::vector<std::string> argv_store{"twinkit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*split_cmd) return cmd_split(split, out);
    if (*fold_cmd) return cmd_fold(fold, out);
    if (*energy_cmd) return cmd_energy(energy, out);
    if (*bench_cmd) return cmd_bench(bench, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace twinkit::cli
