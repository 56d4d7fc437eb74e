#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtel/learner.hpp"
#include "dtel/streams.hpp"

namespace dtel {

struct RunResult {
  std::string algorithm;
  std::string stream;
  std::vector<double> per_chunk_accuracy;
  // Wall-clock seconds spent in update() per evaluated step.
  std::vector<double> seconds;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation
};

// Raised when a learner fails mid-run; carries the failing step.
class RunError : public std::runtime_error {
 public:
  RunError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

double accuracy(const Learner& learner, const Chunk& chunk);

// Train on pair.train, then score the updated model on pair.test.
RunResult run_synthetic(Learner& learner, std::span<const ChunkPair> stream, std::string stream_id = {});

// Test-then-train: chunk t >= 1 scores the model built from chunks < t.
RunResult run_prequential(Learner& learner, std::span<const Chunk> chunks, std::string stream_id = {});

Summary summarize(std::span<const double> values);
inline Summary summarize(const RunResult& result) { return summarize(result.per_chunk_accuracy); }

enum class Verdict { a_better, b_better, tie };

struct RankSumResult {
  Verdict verdict = Verdict::tie;
  double u_a = 0.0;      // Mann-Whitney U of sample a
  double rank_sum_a = 0.0;
  double z = 0.0;
  double p_value = 1.0;  // two-sided
};

// Two-sided Wilcoxon rank-sum test with midranks and the tie-corrected
// normal approximation.
RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

}  // namespace dtel
