#include "dtel/core.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

namespace dtel {

int FeatureDescriptor::category_index(std::string_view symbol) const {
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == symbol) return static_cast<int>(i);
  return -1;
}

void Schema::validate() const {
  if (num_classes < 2) throw InputError("schema needs at least 2 classes");
  if (features.empty()) throw InputError("schema needs at least one feature");
  for (std::size_t f = 0; f < features.size(); ++f) {
    const auto& fd = features[f];
    if (!fd.is_categorical()) continue;
    if (fd.domain.empty()) throw InputError("categorical feature " + std::to_string(f) + " has an empty domain");
    if (fd.domain.size() > kMaxCategories)
      throw InputError("categorical feature " + std::to_string(f) + " exceeds " +
                       std::to_string(kMaxCategories) + " categories");
    std::set<std::string> seen(fd.domain.begin(), fd.domain.end());
    if (seen.size() != fd.domain.size())
      throw InputError("categorical feature " + std::to_string(f) + " has duplicate symbols");
  }
}

void validate_instance(const Instance& instance, const Schema& schema) {
  if (instance.values.size() != schema.num_features())
    throw InputError("instance has " + std::to_string(instance.values.size()) + " values, schema expects " +
                     std::to_string(schema.num_features()));
  if (instance.label >= schema.num_classes)
    throw InputError("label " + std::to_string(instance.label) + " out of range");
  for (std::size_t f = 0; f < instance.values.size(); ++f) {
    const double v = instance.values[f];
    if (!std::isfinite(v)) throw InputError("non-finite value in feature " + std::to_string(f));
    const auto& fd = schema.features[f];
    if (fd.is_categorical()) {
      if (v < 0 || v != std::floor(v) || v >= static_cast<double>(fd.domain.size()))
        throw InputError("invalid category code in feature " + std::to_string(f));
    }
  }
}

void validate_chunk(const Chunk& chunk) {
  if (!chunk.schema) throw InputError("chunk has no schema");
  if (chunk.empty()) throw InputError("chunk " + std::to_string(chunk.index) + " is empty");
  for (const auto& inst : chunk) validate_instance(inst, *chunk.schema);
}

void validate_chunk(const Chunk& chunk, const Schema& expected) {
  validate_chunk(chunk);
  if (*chunk.schema != expected) throw InputError("chunk schema does not match model schema");
}

Label ClassDistribution::argmax() const { return argmax_lowest(probabilities()); }

std::vector<std::uint32_t> label_counts(const Chunk& chunk) {
  std::vector<std::uint32_t> counts(chunk.schema ? chunk.schema->num_classes : 0, 0);
  for (const auto& inst : chunk) {
    if (inst.label >= counts.size()) counts.resize(inst.label + 1, 0);
    ++counts[inst.label];
  }
  return counts;
}

ClassDistribution class_prior(const Chunk& chunk) {
  const auto counts = label_counts(chunk);
  return ClassDistribution::from_counts(std::span<const std::uint32_t>(counts));
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min(threads, n);
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dtel
