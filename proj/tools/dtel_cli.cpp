// dtel: generate drift streams, run DTEL and baselines, sweep the archive
// size and print comparison tables.
//
// Exit codes: 0 success, 1 input error, 2 runtime failure.

#include <iostream>

#include "CLI11.hpp"
#include "dtel/commands.hpp"
#include "dtel/learner.hpp"

namespace {

void add_stream_overrides(CLI::App& cmd, dtel::StreamOverrides& o) {
  cmd.add_option("--noise", o.noise_rate, "Train label noise rate (default 0.10)")->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--steps", o.n_steps, "Number of learning steps (default 120)")->check(CLI::PositiveNumber);
  cmd.add_option("--chunk-size", o.chunk_size, "Override the preset chunk size")->check(CLI::PositiveNumber);
  cmd.add_option("--test-noise", o.test_noise, "Apply label noise to test chunks too (default: CIR, SIN, STA)");
}

struct TreeFlags {
  std::optional<std::size_t> max_depth;
  bool benchmark = false;

  // --benchmark-trees sets the whole stopping rule; explicit depth still applies.
  void apply(dtel::DtelConfig& c) const {
    if (benchmark) c.stopping = dtel::benchmark_stopping();
    if (max_depth) c.stopping.max_depth = max_depth;
  }
};

void add_model_options(CLI::App& cmd, dtel::DtelConfig& c, TreeFlags& trees) {
  cmd.add_option("-m,--archive-size", c.archive_capacity, "Archive capacity m")->capture_default_str();
  cmd.add_option("--epsilon", c.epsilon, "Weight denominator guard")->capture_default_str();
  cmd.add_option("--max-depth", trees.max_depth, "Tree depth limit (default unbounded)");
  auto* split = cmd.add_option("--min-samples-split", c.stopping.min_samples_split)->capture_default_str();
  cmd.add_option("--min-impurity-decrease", c.stopping.min_impurity_decrease)->capture_default_str();
  cmd.add_flag("--benchmark-trees", trees.benchmark, "Tree settings of the benchmark tables (min samples split 20)")
      ->excludes(split);
  cmd.add_option("--threads", c.threads, "Worker threads for transfers")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concept-drift ensemble learning with diversity-based archives and tree transfer"};
  app.require_subcommand(1);
  // Keys go under a section named after the subcommand, e.g. [run] streams = SEA200A.
  app.set_config("--config", "", "Key-value spec file (INI/TOML)");
  app.fallthrough();

  dtel::GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic drift stream as dataset CSV");
  std::string presets;
  for (const auto& p : dtel::standard_presets()) presets += (presets.empty() ? "" : ", ") + p;
  generate->add_option("preset", gen.preset, "Stream preset: " + presets)->required();
  generate->add_option("-o,--out", gen.out, "Output file ('-' for stdout)")->required();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  add_stream_overrides(*generate, gen.overrides);

  dtel::RunSpec spec;
  TreeFlags run_trees;
  auto* run = app.add_subcommand("run", "Run algorithms over streams and write result CSVs");
  run->add_option("-a,--algorithms", spec.algorithms, "Algorithms: dtel, dtel-no-transfer, dtel-acc-archive, sea")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("-s,--streams", spec.streams, "Stream presets or dataset CSV paths")->delimiter(',')->required();
  run->add_option("--seeds", spec.seeds, "Generator seeds")->delimiter(',')->capture_default_str();
  run->add_option("-o,--output", spec.output_dir, "Output directory")->capture_default_str();
  run->add_option("-j,--jobs", spec.jobs, "Concurrent run cells")->capture_default_str();
  run->add_flag("--timing", spec.timing, "Record per-step wall time in results.csv");
  add_model_options(*run, spec.config, run_trees);
  add_stream_overrides(*run, spec.overrides);

  dtel::SweepOptions sweep;
  TreeFlags sweep_trees;
  auto* sweep_cmd = app.add_subcommand("sweep", "DTEL accuracy as a function of the archive size");
  sweep_cmd->add_option("preset", sweep.preset, "Stream preset")->capture_default_str();
  sweep_cmd->add_option("--m-values", sweep.m_values)->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--seeds", sweep.seeds)->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("-o,--out", sweep.out, "CSV output path");
  sweep_cmd->add_option("-j,--jobs", sweep.jobs)->capture_default_str();
  add_model_options(*sweep_cmd, sweep.config, sweep_trees);
  add_stream_overrides(*sweep_cmd, sweep.overrides);

  std::string report_dir;
  std::string reference = "dtel";
  auto* report = app.add_subcommand("report", "Print the accuracy table of a result directory");
  report->add_option("dir", report_dir, "Directory holding results.csv")->required();
  report->add_option("--reference", reference, "Algorithm compared against the others")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*generate) {
      dtel::cmd_generate(gen, std::cout);
    } else if (*run) {
      run_trees.apply(spec.config);
      dtel::cmd_run(spec, std::cout);
    } else if (*sweep_cmd) {
      sweep_trees.apply(sweep.config);
      const auto points = dtel::cmd_sweep(sweep, std::cout);
      (void)points;
    } else if (*report) {
      std::cout << dtel::cmd_report(report_dir, reference);
    }
  } catch (const dtel::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
