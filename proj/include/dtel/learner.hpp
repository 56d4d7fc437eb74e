#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dtel/baselines.hpp"
#include "dtel/engine.hpp"

namespace dtel {

// Uniform step interface shared by DTEL and the baselines. Learners only
// ever see training chunks through update().
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string_view name() const = 0;
  virtual void update(const Chunk& train) = 0;
  // Requires at least one prior update().
  virtual Label predict(const Instance& instance) const = 0;
};

// Registered names: "dtel", "dtel-no-transfer", "dtel-acc-archive", "sea".
std::vector<std::string> registered_learners();
bool is_registered_learner(std::string_view name);
// Throws InputError for unknown names or invalid configuration.
std::unique_ptr<Learner> make_learner(std::string_view name, const DtelConfig& config);

}  // namespace dtel
