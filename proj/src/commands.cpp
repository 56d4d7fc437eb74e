#include "dtel/commands.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "dtel/dataset_csv.hpp"
#include "dtel/learner.hpp"

namespace dtel {

namespace fs = std::filesystem;

namespace {

std::string percent(const Summary& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f +- %.2f", 100.0 * s.mean, 100.0 * s.stddev);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

DriftStreamConfig StreamOverrides::apply(DriftStreamConfig cfg) const {
  if (noise_rate) cfg.noise_rate = *noise_rate;
  if (n_steps) cfg.n_steps = *n_steps;
  if (chunk_size) cfg.chunk_size = *chunk_size;
  if (test_noise) cfg.test_noise = *test_noise;
  cfg.validate();
  return cfg;
}

std::size_t cmd_generate(const GenerateOptions& options, std::ostream& log) {
  const auto cfg = options.overrides.apply(DriftStreamConfig::from_preset(options.preset, options.seed));
  const auto stream = make_stream(cfg);
  std::ostringstream csv;
  write_dataset_csv(csv, stream);
  std::size_t rows = 0;
  for (const auto& pair : stream) rows += pair.train.size() + pair.test.size();
  if (options.out.empty() || options.out == "-") {
    log << csv.str();
  } else {
    write_file_atomic(options.out, csv.str());
    log << "wrote " << rows << " rows (" << cfg.n_steps << " steps x 2 x " << cfg.chunk_size << ") to "
        << options.out << '\n';
  }
  return rows;
}

void RunSpec::validate() const {
  if (algorithms.empty()) throw InputError("no algorithms given");
  if (streams.empty()) throw InputError("no streams given");
  if (seeds.empty()) throw InputError("no seeds given");
  for (const auto& a : algorithms)
    if (!is_registered_learner(a)) throw InputError("unknown algorithm '" + a + "'");
  for (const auto& s : streams) {
    if (is_dataset_path(s)) {
      if (!fs::exists(s)) throw InputError("dataset '" + s + "' not found");
    } else {
      (void)DriftStreamConfig::from_preset(s);
    }
  }
  config.validate();
}

bool is_dataset_path(const std::string& stream) {
  return stream.ends_with(".csv") || stream.find('/') != std::string::npos;
}

std::string stream_id(const std::string& stream, std::uint64_t seed) {
  if (is_dataset_path(stream)) return fs::path(stream).stem().string();
  return DriftStreamConfig::from_preset(stream).name() + ":s" + std::to_string(seed);
}

RunResult run_cell(const std::string& algorithm, const std::string& stream, std::uint64_t seed,
                   const DtelConfig& config, const StreamOverrides& overrides) {
  auto learner = make_learner(algorithm, config);
  const std::string id = stream_id(stream, seed);
  if (is_dataset_path(stream)) {
    const auto ds = read_dataset_file(stream);
    if (ds.has_test()) {
      const auto pairs = ds.pairs();
      return run_synthetic(*learner, pairs, id);
    }
    return run_prequential(*learner, ds.train, id);
  }
  const auto cfg = overrides.apply(DriftStreamConfig::from_preset(stream, seed));
  const auto pairs = make_stream(cfg);
  return run_synthetic(*learner, pairs, id);
}

std::vector<RunResult> cmd_run(const RunSpec& spec, std::ostream& log) {
  spec.validate();

  struct Cell {
    std::string algorithm;
    std::string stream;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& stream : spec.streams) {
    // A dataset file is fixed, so it runs once regardless of seeds.
    const auto seeds = is_dataset_path(stream) ? std::vector<std::uint64_t>{spec.seeds.front()} : spec.seeds;
    for (auto seed : seeds)
      for (const auto& algorithm : spec.algorithms) cells.push_back({algorithm, stream, seed});
  }

  std::vector<RunResult> runs(cells.size());
  parallel_for(cells.size(), spec.jobs, [&](std::size_t i) {
    runs[i] = run_cell(cells[i].algorithm, cells[i].stream, cells[i].seed, spec.config, spec.overrides);
  });

  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& run = runs[i];
    for (std::size_t t = 0; t < run.per_chunk_accuracy.size(); ++t) {
      ResultRow row{i, run.algorithm, run.stream, t, run.per_chunk_accuracy[t], std::nullopt};
      if (spec.timing && t < run.seconds.size()) row.seconds = run.seconds[t];
      rows.push_back(std::move(row));
    }
    log << run.algorithm << " on " << run.stream << ": " << percent(summarize(run)) << '\n';
  }

  fs::create_directories(spec.output_dir);
  std::ostringstream results;
  write_results_csv(results, rows);
  write_file_atomic((fs::path(spec.output_dir) / "results.csv").string(), results.str());
  std::ostringstream summary;
  write_summary_csv(summary, runs);
  write_file_atomic((fs::path(spec.output_dir) / "summary.csv").string(), summary.str());
  return runs;
}

std::vector<SweepPoint> cmd_sweep(const SweepOptions& options, std::ostream& log) {
  std::vector<std::size_t> ms;
  for (auto m : options.m_values) {
    if (m == 0) throw InputError("archive size must be positive");
    if (std::find(ms.begin(), ms.end(), m) == ms.end()) ms.push_back(m);
  }
  if (ms.empty()) throw InputError("no archive sizes given");
  if (options.seeds.empty()) throw InputError("no seeds given");
  (void)DriftStreamConfig::from_preset(options.preset);

  const std::size_t per_m = options.seeds.size();
  std::vector<RunResult> runs(ms.size() * per_m);
  parallel_for(runs.size(), options.jobs, [&](std::size_t i) {
    DtelConfig cfg = options.config;
    cfg.archive_capacity = ms[i / per_m];
    runs[i] = run_cell("dtel", options.preset, options.seeds[i % per_m], cfg, options.overrides);
  });

  std::vector<SweepPoint> points;
  std::ostringstream csv;
  csv << "m,mean_accuracy,std_accuracy\n";
  for (std::size_t j = 0; j < ms.size(); ++j) {
    std::vector<double> pooled;
    for (std::size_t s = 0; s < per_m; ++s) {
      const auto& acc = runs[j * per_m + s].per_chunk_accuracy;
      pooled.insert(pooled.end(), acc.begin(), acc.end());
    }
    const auto summary = summarize(pooled);
    points.push_back({ms[j], summary});
    csv << ms[j] << ',' << format_double(summary.mean) << ',' << format_double(summary.stddev) << '\n';
    log << "m=" << ms[j] << ": " << percent(summary) << '\n';
  }
  log << "note: archive sizes above 20 are recommended; accuracy tends to level off there\n";
  if (!options.out.empty()) write_file_atomic(options.out, csv.str());
  return points;
}

std::string cmd_report(const std::string& result_dir, const std::string& reference) {
  const auto path = fs::path(result_dir) / "results.csv";
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  const auto rows = read_results_csv(in);

  std::vector<std::string> streams;
  std::vector<std::string> algorithms;
  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
  for (const auto& r : rows) {
    const std::string base = r.stream.substr(0, r.stream.find(':'));
    if (std::find(streams.begin(), streams.end(), base) == streams.end()) streams.push_back(base);
    if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end())
      algorithms.push_back(r.algorithm);
    cells[{base, r.algorithm}].push_back(r.accuracy);
  }
  const bool has_reference = std::find(algorithms.begin(), algorithms.end(), reference) != algorithms.end();

  constexpr std::size_t kWidth = 20;
  std::ostringstream out;
  out << pad("stream", 12);
  for (const auto& a : algorithms) out << pad(a, kWidth);
  out << '\n';

  std::map<std::string, std::array<int, 3>> wtl;  // wins, ties, losses of the reference
  for (const auto& s : streams) {
    double best = -1.0;
    for (const auto& a : algorithms)
      if (auto it = cells.find({s, a}); it != cells.end()) best = std::max(best, summarize(it->second).mean);
    out << pad(s, 12);
    for (const auto& a : algorithms) {
      auto it = cells.find({s, a});
      if (it == cells.end()) {
        out << pad("-", kWidth);
        continue;
      }
      const auto summary = summarize(it->second);
      std::string cell = (summary.mean == best ? "*" : " ") + percent(summary);
      if (has_reference && a != reference) {
        if (auto ref = cells.find({s, reference}); ref != cells.end()) {
          const auto test = rank_sum_test(ref->second, it->second);
          auto& counts = wtl[a];
          if (test.verdict == Verdict::a_better) {
            cell += " +";
            ++counts[0];
          } else if (test.verdict == Verdict::b_better) {
            cell += " -";
            ++counts[2];
          } else {
            ++counts[1];
          }
        }
      }
      out << pad(cell, kWidth);
    }
    out << '\n';
  }
  if (has_reference) {
    out << pad("w-t-l", 12);
    for (const auto& a : algorithms) {
      if (a == reference) {
        out << pad("(reference)", kWidth);
        continue;
      }
      const auto c = wtl[a];
      out << pad(std::to_string(c[0]) + "-" + std::to_string(c[1]) + "-" + std::to_string(c[2]), kWidth);
    }
    out << '\n';
    out << "* best mean in row; +/- " << reference
        << " significantly better/worse (Wilcoxon rank-sum, alpha 0.05)\n";
  }
  return out.str();
}

}  // namespace dtel
