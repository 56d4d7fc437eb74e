#include "dtel/engine.hpp"

#include "dtel/diversity.hpp"

namespace dtel {

void DtelConfig::validate() const {
  if (archive_capacity < 1) throw InputError("archive capacity must be positive");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  stopping.validate();
}

Prediction WeightedEnsemble::predict(const Instance& instance) const { return predict_ensemble(*this, instance); }

Prediction predict_ensemble(const WeightedEnsemble& ensemble, const Instance& instance) {
  if (ensemble.members.empty()) throw std::logic_error("predict on an empty ensemble");
  const std::size_t k = ensemble.members.front().model->schema().num_classes;
  std::vector<double> combined(k, 0.0);
  double total_weight = 0.0;
  for (const auto& member : ensemble.members) {
    const auto& counts = member.model->leaf_for(instance).class_counts;
    double leaf_total = 0.0;
    for (auto c : counts) leaf_total += c;
    for (std::size_t y = 0; y < k; ++y) combined[y] += member.weight * (counts[y] / leaf_total);
    total_weight += member.weight;
  }
  for (auto& p : combined) p /= total_weight;
  ClassDistribution dist(std::move(combined));
  const Label label = dist.argmax();
  return Prediction{label, std::move(dist)};
}

double mse_model(const Tree& model, const Chunk& chunk) {
  double sum = 0.0;
  for (const auto& inst : chunk) {
    const auto& leaf = model.leaf_for(inst);
    const double p = static_cast<double>(leaf.class_counts[inst.label]) / static_cast<double>(leaf.total());
    sum += (1.0 - p) * (1.0 - p);
  }
  return sum / static_cast<double>(chunk.size());
}

double mse_random(const Chunk& chunk) {
  const auto prior = class_prior(chunk);
  double sum = 0.0;
  for (double p : prior.probabilities()) sum += p * (1.0 - p) * (1.0 - p);
  return sum;
}

double weight_adapted(double mse_r, double mse_i, double epsilon) { return 1.0 / (mse_r + mse_i + epsilon); }

double weight_new(double mse_r, double epsilon) { return 1.0 / (mse_r + epsilon); }

Archive update_archive(const Archive& archive, TreePtr fresh, const Chunk& chunk, ReplacementPolicy policy) {
  Archive next = archive;
  if (!archive.full()) {
    next.models.push_back(std::move(fresh));
    return next;
  }

  std::vector<TreePtr> candidates = archive.models;
  candidates.push_back(std::move(fresh));

  std::size_t remove = 0;
  if (candidates.size() < 3) {
    // Capacity 1: a lone survivor has no diversity to compare, so every
    // removal ties and the older model goes.
    remove = 0;
  } else if (policy == ReplacementPolicy::diversity) {
    std::vector<CorrectnessVector> vectors;
    vectors.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
      vectors.push_back(correctness(*candidates[i], chunk, i + 1 == candidates.size() ? kNewModel : i));
    remove = select_removal(vectors);
  } else {
    double worst = 2.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double acc = accuracy(*candidates[i], chunk);
      if (acc < worst) {
        worst = acc;
        remove = i;
      }
    }
  }
  candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(remove));
  next.models = std::move(candidates);
  return next;
}

StepResult process_chunk(const Archive& archive, const Chunk& chunk, const DtelConfig& config,
                         const DtelVariant& variant) {
  config.validate();
  validate_chunk(chunk);
  if (archive.capacity != config.archive_capacity) throw InputError("archive capacity differs from configuration");
  for (const auto& model : archive.models) validate_chunk(chunk, model->schema());

  auto fresh = std::make_shared<const Tree>(train_cart(chunk, config.stopping));

  const std::size_t n = archive.size();
  std::vector<TreePtr> adapted(n);
  std::vector<double> mse(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    adapted[i] = variant.transfer ? transfer_tree(archive.models[i], chunk, config.stopping).tree : archive.models[i];
    mse[i] = mse_model(*adapted[i], chunk);
  });

  StepResult result;
  result.archive = update_archive(archive, fresh, chunk, variant.policy);

  const double mse_r = mse_random(chunk);
  result.ensemble.chunk_index = chunk.index;
  result.ensemble.members.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    result.ensemble.members.push_back({adapted[i], weight_adapted(mse_r, mse[i], config.epsilon), MemberKind::adapted});
  result.ensemble.members.push_back({fresh, weight_new(mse_r, config.epsilon), MemberKind::fresh});
  return result;
}

}  // namespace dtel
