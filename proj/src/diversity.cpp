#include "dtel/diversity.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace dtel {

namespace {

// Oldest first, the new model after every archived one, then position.
bool removed_first(const CorrectnessVector& a, std::size_t pos_a, const CorrectnessVector& b, std::size_t pos_b) {
  return std::tuple(a.is_new(), a.origin_chunk_index, pos_a) < std::tuple(b.is_new(), b.origin_chunk_index, pos_b);
}

}  // namespace

CorrectnessVector correctness(const Tree& model, const Chunk& chunk, std::size_t model_id) {
  CorrectnessVector cv;
  cv.model_id = model_id;
  cv.origin_chunk_index = model.origin_chunk_index();
  cv.bits.reserve(chunk.size());
  for (const auto& inst : chunk) cv.bits.push_back(model.predict(inst) == inst.label);
  return cv;
}

double q_statistic(const CorrectnessVector& a, const CorrectnessVector& b) {
  if (a.bits.size() != b.bits.size()) throw InputError("correctness vectors differ in length");
  double n11 = 0, n00 = 0, n10 = 0, n01 = 0;
  for (std::size_t k = 0; k < a.bits.size(); ++k) {
    const bool x = a.bits[k];
    const bool y = b.bits[k];
    if (x && y)
      ++n11;
    else if (!x && !y)
      ++n00;
    else if (x)
      ++n10;
    else
      ++n01;
  }
  const double den = n11 * n00 + n01 * n10;
  if (den == 0.0) return 0.0;
  return (n11 * n00 - n01 * n10) / den;
}

double diversity(std::span<const CorrectnessVector> vectors) {
  if (vectors.size() < 2) throw InputError("diversity needs at least two models");
  double sum = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i + 1; j < vectors.size(); ++j) sum += q_statistic(vectors[i], vectors[j]);
  const double pairs = static_cast<double>(vectors.size() * (vectors.size() - 1) / 2);
  return 1.0 - sum / pairs;
}

std::size_t select_removal(std::span<const CorrectnessVector> candidates) {
  const std::size_t n = candidates.size();
  if (n < 3) throw InputError("select_removal needs at least three candidates");

  std::vector<double> row(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = q_statistic(candidates[i], candidates[j]);
      row[i] += v;
      row[j] += v;
      total += v;
    }
  }

  const double remaining_pairs = static_cast<double>((n - 1) * (n - 2) / 2);
  std::vector<double> div(n);
  double best_div = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    div[i] = 1.0 - (total - row[i]) / remaining_pairs;
    best_div = std::max(best_div, div[i]);
  }
  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (div[i] < best_div - kDiversityTieTolerance) continue;
    if (best == n || removed_first(candidates[i], i, candidates[best], best)) best = i;
  }
  return best;
}

}  // namespace dtel
