#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dtel/engine.hpp"
#include "dtel/eval.hpp"
#include "dtel/streams.hpp"

namespace dtel {

// Tree settings used for the benchmark tables: leaves stop splitting below
// 20 samples instead of growing to purity, which keeps adapted trees from
// memorizing the label noise of each chunk.
inline StoppingParams benchmark_stopping() { return StoppingParams{std::nullopt, 20, 0.0}; }

// Stream overrides applied on top of a preset.
struct StreamOverrides {
  std::optional<double> noise_rate;
  std::optional<std::size_t> n_steps;
  std::optional<std::size_t> chunk_size;
  std::optional<bool> test_noise;

  DriftStreamConfig apply(DriftStreamConfig cfg) const;
};

struct GenerateOptions {
  std::string preset = "SEA200A";
  std::uint64_t seed = 1;
  StreamOverrides overrides;
  std::string out;
};

// Writes the stream as dataset CSV; returns the number of data rows.
std::size_t cmd_generate(const GenerateOptions& options, std::ostream& log);

struct RunSpec {
  std::vector<std::string> algorithms{"dtel"};
  // Preset names ("SEA200A") or dataset CSV paths.
  std::vector<std::string> streams;
  std::vector<std::uint64_t> seeds{1};
  DtelConfig config;
  StreamOverrides overrides;
  std::string output_dir = "results";
  // Concurrent (algorithm, stream, seed) cells.
  std::size_t jobs = 1;
  // Fill the seconds column; timings make reruns differ byte-wise.
  bool timing = false;

  void validate() const;
};

// Runs every cell and writes results.csv and summary.csv into
// spec.output_dir. Returns the runs in cell order.
std::vector<RunResult> cmd_run(const RunSpec& spec, std::ostream& log);

// Runs one algorithm on one stream entry (preset or CSV path) and seed.
RunResult run_cell(const std::string& algorithm, const std::string& stream, std::uint64_t seed,
                   const DtelConfig& config, const StreamOverrides& overrides);

// Identifier used in result files: "<preset>:s<seed>" or the CSV file stem.
std::string stream_id(const std::string& stream, std::uint64_t seed);
bool is_dataset_path(const std::string& stream);

struct SweepOptions {
  std::string preset = "SEA200A";
  std::vector<std::size_t> m_values{1, 5, 10, 20, 25};
  std::vector<std::uint64_t> seeds{1};
  DtelConfig config;
  StreamOverrides overrides;
  std::string out;
  std::size_t jobs = 1;
};

struct SweepPoint {
  std::size_t m = 0;
  Summary accuracy;  // pooled over seeds and chunks
};

// DTEL accuracy per archive size (duplicates dropped, order kept). Writes
// m,mean_accuracy,std_accuracy to options.out when set.
std::vector<SweepPoint> cmd_sweep(const SweepOptions& options, std::ostream& log);

// Text table of mean +- std (percent) per stream and algorithm with the best
// cell of each row starred, rank-sum marks versus `reference` and a
// win-tie-loss line. Seeds of a preset are pooled into one row.
std::string cmd_report(const std::string& result_dir, const std::string& reference = "dtel");

}  // namespace dtel
