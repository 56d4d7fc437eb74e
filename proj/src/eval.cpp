#include "dtel/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace dtel {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

double accuracy(const Learner& learner, const Chunk& chunk) {
  if (chunk.empty()) throw InputError("cannot score an empty chunk");
  std::size_t correct = 0;
  for (const auto& inst : chunk) correct += learner.predict(inst) == inst.label;
  return static_cast<double>(correct) / static_cast<double>(chunk.size());
}

RunResult run_synthetic(Learner& learner, std::span<const ChunkPair> stream, std::string stream_id) {
  RunResult result{std::string(learner.name()), std::move(stream_id), {}, {}};
  for (std::size_t t = 0; t < stream.size(); ++t) {
    try {
      const auto start = Clock::now();
      learner.update(stream[t].train);
      result.seconds.push_back(seconds_since(start));
      result.per_chunk_accuracy.push_back(accuracy(learner, stream[t].test));
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw RunError(t, e.what());
    }
  }
  return result;
}

RunResult run_prequential(Learner& learner, std::span<const Chunk> chunks, std::string stream_id) {
  RunResult result{std::string(learner.name()), std::move(stream_id), {}, {}};
  for (std::size_t t = 0; t < chunks.size(); ++t) {
    try {
      if (t > 0) result.per_chunk_accuracy.push_back(accuracy(learner, chunks[t]));
      const auto start = Clock::now();
      learner.update(chunks[t]);
      if (t > 0) result.seconds.push_back(seconds_since(start));
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw RunError(t, e.what());
    }
  }
  return result;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.empty() || b.empty()) throw InputError("rank-sum test needs two non-empty samples");
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;

  std::vector<std::pair<double, bool>> pooled;  // (value, from a)
  pooled.reserve(n);
  for (double v : a) pooled.emplace_back(v, true);
  for (double v : b) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;  // sum of (t^3 - t) over tie groups
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].second) rank_sum_a += midrank;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  RankSumResult r;
  const double dna = static_cast<double>(na);
  const double dnb = static_cast<double>(nb);
  const double dn = static_cast<double>(n);
  r.rank_sum_a = rank_sum_a;
  r.u_a = rank_sum_a - dna * (dna + 1.0) / 2.0;
  const double mean_u = dna * dnb / 2.0;
  const double var_u = dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (var_u <= 0.0) {
    // Every value tied: no evidence either way.
    r.verdict = Verdict::tie;
    return r;
  }
  r.z = (r.u_a - mean_u) / std::sqrt(var_u);
  r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
  if (r.p_value < alpha) r.verdict = r.u_a > mean_u ? Verdict::a_better : Verdict::b_better;
  return r;
}

}  // namespace dtel
