#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "dtel/cart.hpp"

namespace dtel {

// Model id of the freshly trained tree among removal candidates.
inline constexpr std::size_t kNewModel = std::numeric_limits<std::size_t>::max();

// bits[k] is true iff the model classifies instance k of the evaluation chunk
// correctly.
struct CorrectnessVector {
  std::vector<bool> bits;
  std::size_t model_id = kNewModel;
  std::size_t origin_chunk_index = 0;

  bool is_new() const { return model_id == kNewModel; }
};

CorrectnessVector correctness(const Tree& model, const Chunk& chunk, std::size_t model_id = kNewModel);

// Yule's Q over the 2x2 agreement table of two correctness vectors. A zero
// denominator yields 0 (independence). Throws InputError on length mismatch.
double q_statistic(const CorrectnessVector& a, const CorrectnessVector& b);

// 1 - mean pairwise Q. Throws InputError for fewer than two vectors.
double diversity(std::span<const CorrectnessVector> vectors);

// Removal candidates whose div values differ by less than this are tied.
inline constexpr double kDiversityTieTolerance = 1e-12;

// Position in `candidates` of the model whose removal leaves the most diverse
// set. Ties go to the oldest origin_chunk_index; the new model loses ties
// last. Requires at least three candidates (throws InputError otherwise).
std::size_t select_removal(std::span<const CorrectnessVector> candidates);

}  // namespace dtel
