#include "dtel/baselines.hpp"

#include <algorithm>

namespace dtel {

namespace {

std::size_t vote_accuracy_count(std::span<const std::vector<Label>> members, std::span<const Label> labels,
                                std::size_t num_classes, std::size_t replaced, std::span<const Label> fresh) {
  std::vector<std::uint32_t> tally(num_classes);
  std::size_t correct = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    std::fill(tally.begin(), tally.end(), 0);
    for (std::size_t i = 0; i < members.size(); ++i) ++tally[i == replaced ? fresh[k] : members[i][k]];
    correct += argmax_lowest(std::span<const std::uint32_t>(tally)) == labels[k];
  }
  return correct;
}

}  // namespace

Label majority_vote(std::span<const Label> votes, std::size_t num_classes) {
  std::vector<std::uint32_t> tally(num_classes, 0);
  for (Label v : votes) ++tally[v];
  return argmax_lowest(std::span<const std::uint32_t>(tally));
}

Label SeaEnsemble::predict(const Instance& instance) const {
  if (models.empty()) throw std::logic_error("predict on an empty SEA ensemble");
  std::vector<Label> votes;
  votes.reserve(models.size());
  for (const auto& m : models) votes.push_back(m->predict(instance));
  return majority_vote(votes, models.front()->schema().num_classes);
}

std::optional<std::size_t> sea_select_replacement(std::span<const std::vector<Label>> archived,
                                                  std::span<const Label> fresh, std::span<const Label> labels,
                                                  std::size_t num_classes) {
  const std::size_t none = archived.size();
  std::size_t best_correct = vote_accuracy_count(archived, labels, num_classes, none, fresh);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < archived.size(); ++i) {
    const std::size_t c = vote_accuracy_count(archived, labels, num_classes, i, fresh);
    if (c > best_correct) {
      best_correct = c;
      best = i;
    }
  }
  return best;
}

SeaEnsemble sea_process_chunk(const SeaEnsemble& state, const Chunk& chunk, const DtelConfig& config) {
  config.validate();
  validate_chunk(chunk);
  for (const auto& model : state.models) validate_chunk(chunk, model->schema());

  auto fresh = std::make_shared<const Tree>(train_cart(chunk, config.stopping));
  SeaEnsemble next = state;
  if (state.models.size() < state.capacity) {
    next.models.push_back(std::move(fresh));
    return next;
  }

  std::vector<std::vector<Label>> archived(state.models.size());
  parallel_for(state.models.size(), config.threads, [&](std::size_t i) {
    archived[i].reserve(chunk.size());
    for (const auto& inst : chunk) archived[i].push_back(state.models[i]->predict(inst));
  });
  std::vector<Label> fresh_pred;
  std::vector<Label> labels;
  for (const auto& inst : chunk) {
    fresh_pred.push_back(fresh->predict(inst));
    labels.push_back(inst.label);
  }
  if (auto slot = sea_select_replacement(archived, fresh_pred, labels, chunk.schema->num_classes)) {
    // The replacement takes the newest position so the list stays age-ordered.
    next.models.erase(next.models.begin() + static_cast<std::ptrdiff_t>(*slot));
    next.models.push_back(std::move(fresh));
  }
  return next;
}

StepResult dtel_no_transfer(const Archive& archive, const Chunk& chunk, const DtelConfig& config) {
  return process_chunk(archive, chunk, config, DtelVariant{false, ReplacementPolicy::diversity});
}

StepResult dtel_accuracy_archive(const Archive& archive, const Chunk& chunk, const DtelConfig& config) {
  return process_chunk(archive, chunk, config, DtelVariant{true, ReplacementPolicy::lowest_accuracy});
}

}  // namespace dtel
