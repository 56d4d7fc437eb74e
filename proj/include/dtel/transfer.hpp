#pragma once

#include <memory>

#include "dtel/cart.hpp"

namespace dtel {

// A historical tree fitted to a newer chunk. Lives for one time step.
struct AdaptedTree {
  std::shared_ptr<const Tree> tree;
  std::shared_ptr<const Tree> source;
  std::size_t target_chunk_index = 0;
};

// Structure-preserving adaptation of `source` to `chunk`:
//  1. every instance is routed through the source splits; each leaf that
//     receives instances takes their label counts and majority label, a leaf
//     receiving none keeps its historical counts and label;
//  2. each leaf that received instances is regrown with CART on exactly
//     those instances (a no-op when the stopping criteria already hold),
//     with depths continuing from the leaf.
// The source is never modified. Throws InputError on schema mismatch.
AdaptedTree transfer_tree(std::shared_ptr<const Tree> source, const Chunk& chunk, const StoppingParams& params);

// Accuracy of the adapted tree on `chunk`.
double adapted_training_accuracy(const AdaptedTree& adapted, const Chunk& chunk);

// Fraction of `chunk` that `tree` classifies correctly.
double accuracy(const Tree& tree, const Chunk& chunk);

}  // namespace dtel
