#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "dtel/cart.hpp"
#include "dtel/transfer.hpp"

namespace dtel {

using TreePtr = std::shared_ptr<const Tree>;

// Bounded set of preserved original trees, oldest first.
struct Archive {
  std::vector<TreePtr> models;
  std::size_t capacity = 25;

  std::size_t size() const { return models.size(); }
  bool full() const { return models.size() >= capacity; }
};

struct DtelConfig {
  std::size_t archive_capacity = 25;
  double epsilon = 1e-10;
  StoppingParams stopping;
  // Worker threads for transfers and member evaluation; 1 runs inline.
  std::size_t threads = 1;

  void validate() const;
};

enum class MemberKind { adapted, fresh };

struct EnsembleMember {
  TreePtr model;
  double weight = 1.0;
  MemberKind kind = MemberKind::adapted;
};

struct Prediction {
  Label label = 0;
  ClassDistribution distribution;
};

// Weighted soft vote: sum_i w_i p_i(y|x) / sum_i w_i.
struct WeightedEnsemble {
  std::vector<EnsembleMember> members;
  std::size_t chunk_index = 0;

  Prediction predict(const Instance& instance) const;
};

Prediction predict_ensemble(const WeightedEnsemble& ensemble, const Instance& instance);

// (1/|D|) sum (1 - p(y|x))^2 over the true labels.
double mse_model(const Tree& model, const Chunk& chunk);
// sum_y p(y) (1 - p(y))^2 under the chunk's class prior.
double mse_random(const Chunk& chunk);
double weight_adapted(double mse_r, double mse_i, double epsilon);
double weight_new(double mse_r, double epsilon);

// How the archive chooses a model to drop when over capacity.
enum class ReplacementPolicy {
  diversity,       // maximize div of the remainder
  lowest_accuracy  // drop the least accurate original on the chunk
};

// Switches used by the ablation baselines; the defaults are full DTEL.
struct DtelVariant {
  bool transfer = true;
  ReplacementPolicy policy = ReplacementPolicy::diversity;
};

struct StepResult {
  WeightedEnsemble ensemble;
  Archive archive;
};

// One time step: train f_t, transfer every archived tree to the chunk,
// update the archive with f_t, weight the adapted trees and f_t, and return
// the ensemble together with the updated archive. The ensemble contains the
// adapted versions of all trees archived at step start, including one that
// the update just evicted.
StepResult process_chunk(const Archive& archive, const Chunk& chunk, const DtelConfig& config,
                         const DtelVariant& variant = {});

// Archive update alone: append under capacity, else drop one of archive+fresh.
Archive update_archive(const Archive& archive, TreePtr fresh, const Chunk& chunk, ReplacementPolicy policy);

}  // namespace dtel
