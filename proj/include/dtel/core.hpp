#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dtel {

// Raised for malformed or inconsistent user input (schemas, chunks, files,
// configuration). The CLI maps it to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Label = std::uint32_t;

enum class FeatureKind { numeric, categorical };

// Categorical domains are capped so subset tests fit in a 64-bit mask.
inline constexpr std::size_t kMaxCategories = 64;

struct FeatureDescriptor {
  FeatureKind kind = FeatureKind::numeric;
  // Ordered symbol identifiers; only meaningful for categorical features.
  std::vector<std::string> domain;

  static FeatureDescriptor numeric() { return {}; }
  static FeatureDescriptor categorical(std::vector<std::string> symbols) {
    return {FeatureKind::categorical, std::move(symbols)};
  }

  bool is_categorical() const { return kind == FeatureKind::categorical; }
  // Index of `symbol` in the domain, or -1.
  int category_index(std::string_view symbol) const;

  bool operator==(const FeatureDescriptor&) const = default;
};

struct Schema {
  std::vector<FeatureDescriptor> features;
  std::size_t num_classes = 2;

  std::size_t num_features() const { return features.size(); }
  // Throws InputError unless num_classes >= 2, there is at least one feature
  // and every categorical domain is non-empty, duplicate-free and small enough.
  void validate() const;

  bool operator==(const Schema&) const = default;
};

// One labeled example. Numeric features hold their real value; categorical
// features hold the index of their symbol in the schema domain.
struct Instance {
  std::vector<double> values;
  Label label = 0;

  bool operator==(const Instance&) const = default;
};

// Throws InputError if `instance` disagrees with `schema` in arity, kinds or
// label range, or carries a non-finite value.
void validate_instance(const Instance& instance, const Schema& schema);

struct Chunk {
  std::size_t index = 0;
  std::shared_ptr<const Schema> schema;
  std::vector<Instance> instances;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
  auto begin() const { return instances.begin(); }
  auto end() const { return instances.end(); }
  const Instance& operator[](std::size_t i) const { return instances[i]; }
};

// Throws InputError for a chunk without schema, without instances, or with a
// non-conforming instance.
void validate_chunk(const Chunk& chunk);
// validate_chunk plus equality of the chunk schema with `expected`.
void validate_chunk(const Chunk& chunk, const Schema& expected);

// Normalized probability vector over class indices.
class ClassDistribution {
 public:
  ClassDistribution() = default;
  explicit ClassDistribution(std::vector<double> probabilities)
      : probabilities_(std::move(probabilities)) {}

  // Normalizes raw per-class counts; throws std::logic_error on zero total.
  template <class Count>
  static ClassDistribution from_counts(std::span<const Count> counts) {
    double total = 0.0;
    for (Count c : counts) total += static_cast<double>(c);
    if (total <= 0.0) throw std::logic_error("empty class counts");
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / total;
    return ClassDistribution(std::move(p));
  }

  std::size_t size() const { return probabilities_.size(); }
  double operator[](std::size_t y) const { return probabilities_[y]; }
  std::span<const double> probabilities() const { return probabilities_; }
  // Most probable class; ties resolve to the lowest index.
  Label argmax() const;

 private:
  std::vector<double> probabilities_;
};

// Index of the largest entry, lowest index on ties.
template <class T>
Label argmax_lowest(std::span<const T> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return static_cast<Label>(best);
}

// Empirical class frequencies of a chunk.
ClassDistribution class_prior(const Chunk& chunk);

// Per-class label counts of a chunk.
std::vector<std::uint32_t> label_counts(const Chunk& chunk);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Calls run inline when
// threads <= 1. Exceptions from workers are rethrown (first by index).
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace dtel
