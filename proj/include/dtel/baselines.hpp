#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dtel/engine.hpp"

namespace dtel {

// Streaming ensemble with unweighted majority vote over original trees.
struct SeaEnsemble {
  std::vector<TreePtr> models;
  std::size_t capacity = 25;

  // Majority vote, ties to the lowest class index.
  Label predict(const Instance& instance) const;
};

// Hard majority vote over per-model predictions; ties to the lowest class.
Label majority_vote(std::span<const Label> votes, std::size_t num_classes);

// Replacement search on precomputed predictions. archived[i][k] is the
// prediction of archived model i on instance k, fresh[k] that of the new
// model. Returns the slot whose replacement by the new model gives the most
// accurate majority vote on `labels`, provided it strictly beats the
// unmodified ensemble; ties go to the lowest slot.
std::optional<std::size_t> sea_select_replacement(std::span<const std::vector<Label>> archived,
                                                  std::span<const Label> fresh, std::span<const Label> labels,
                                                  std::size_t num_classes);

SeaEnsemble sea_process_chunk(const SeaEnsemble& state, const Chunk& chunk, const DtelConfig& config);

// DTEL with the transfer step replaced by the identity.
StepResult dtel_no_transfer(const Archive& archive, const Chunk& chunk, const DtelConfig& config);

// DTEL whose archive drops the least accurate model instead of maximizing
// diversity.
StepResult dtel_accuracy_archive(const Archive& archive, const Chunk& chunk, const DtelConfig& config);

}  // namespace dtel
