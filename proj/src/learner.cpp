#include "dtel/learner.hpp"

#include <algorithm>
#include <optional>

namespace dtel {

namespace {

class DtelLearner final : public Learner {
 public:
  DtelLearner(std::string name, DtelConfig config, DtelVariant variant)
      : name_(std::move(name)), config_(config), variant_(variant) {
    archive_.capacity = config.archive_capacity;
  }

  std::string_view name() const override { return name_; }

  void update(const Chunk& train) override {
    auto step = process_chunk(archive_, train, config_, variant_);
    archive_ = std::move(step.archive);
    ensemble_ = std::move(step.ensemble);
  }

  Label predict(const Instance& instance) const override {
    if (!ensemble_) throw std::logic_error(name_ + ": predict before first update");
    return ensemble_->predict(instance).label;
  }

 private:
  std::string name_;
  DtelConfig config_;
  DtelVariant variant_;
  Archive archive_;
  std::optional<WeightedEnsemble> ensemble_;
};

class SeaLearner final : public Learner {
 public:
  explicit SeaLearner(DtelConfig config) : config_(config) { state_.capacity = config.archive_capacity; }

  std::string_view name() const override { return "sea"; }

  void update(const Chunk& train) override { state_ = sea_process_chunk(state_, train, config_); }

  Label predict(const Instance& instance) const override { return state_.predict(instance); }

 private:
  DtelConfig config_;
  SeaEnsemble state_;
};

}  // namespace

std::vector<std::string> registered_learners() { return {"dtel", "dtel-no-transfer", "dtel-acc-archive", "sea"}; }

bool is_registered_learner(std::string_view name) {
  const auto names = registered_learners();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::unique_ptr<Learner> make_learner(std::string_view name, const DtelConfig& config) {
  config.validate();
  if (name == "dtel") return std::make_unique<DtelLearner>("dtel", config, DtelVariant{});
  if (name == "dtel-no-transfer")
    return std::make_unique<DtelLearner>("dtel-no-transfer", config, DtelVariant{false, ReplacementPolicy::diversity});
  if (name == "dtel-acc-archive")
    return std::make_unique<DtelLearner>("dtel-acc-archive", config,
                                         DtelVariant{true, ReplacementPolicy::lowest_accuracy});
  if (name == "sea") return std::make_unique<SeaLearner>(config);
  throw InputError("unknown algorithm '" + std::string(name) + "'");
}

}  // namespace dtel
