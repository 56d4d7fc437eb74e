#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dtel/core.hpp"

namespace dtel {

// Growth at a node stops when it is pure, holds fewer than min_samples_split
// samples, sits at max_depth, or its best Gini decrease is below
// min_impurity_decrease. The defaults grow trees to purity.
struct StoppingParams {
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_split = 2;
  double min_impurity_decrease = 0.0;

  void validate() const;
  bool operator==(const StoppingParams&) const = default;
};

// value <= threshold goes left.
struct ThresholdTest {
  double threshold = 0.0;
  bool operator==(const ThresholdTest&) const = default;
};

// Category c goes left iff bit c of left_mask is set. Categories never seen
// while growing the split fall outside the mask and go right.
struct SubsetTest {
  std::uint64_t left_mask = 0;
  bool operator==(const SubsetTest&) const = default;
};

struct InternalNode {
  std::size_t feature = 0;
  std::variant<ThresholdTest, SubsetTest> test;
  std::size_t left = 0;
  std::size_t right = 0;

  bool goes_left(const Instance& instance) const;
};

struct LeafNode {
  std::vector<std::uint32_t> class_counts;
  Label predicted_label = 0;

  std::uint64_t total() const;
};

struct TreeNode {
  std::size_t depth = 0;
  std::variant<InternalNode, LeafNode> body;

  bool is_leaf() const { return std::holds_alternative<LeafNode>(body); }
  const LeafNode& leaf() const { return std::get<LeafNode>(body); }
  LeafNode& leaf() { return std::get<LeafNode>(body); }
  const InternalNode& internal() const { return std::get<InternalNode>(body); }
  InternalNode& internal() { return std::get<InternalNode>(body); }
};

// Leaf with the given counts; the label is their argmax (lowest index wins).
LeafNode make_leaf(std::vector<std::uint32_t> counts);

// Immutable trained CART classifier. Nodes live in a flat array, root at
// index 0, stored in pre-order.
class Tree {
 public:
  Tree(std::vector<TreeNode> nodes, std::shared_ptr<const Schema> schema, StoppingParams params,
       std::size_t origin_chunk_index);

  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(std::size_t i) const { return nodes_[i]; }
  std::span<const TreeNode> nodes() const { return nodes_; }
  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }
  const StoppingParams& params() const { return params_; }
  std::size_t origin_chunk_index() const { return origin_chunk_index_; }

  // Index of the leaf reached by `instance`.
  std::size_t route_to_leaf(const Instance& instance) const;
  const LeafNode& leaf_for(const Instance& instance) const { return nodes_[route_to_leaf(instance)].leaf(); }

  Label predict(const Instance& instance) const { return leaf_for(instance).predicted_label; }
  // Class ratios of the routed leaf.
  ClassDistribution posterior(const Instance& instance) const;

  std::size_t leaf_count() const;
  std::size_t depth() const;

  // Stable pre-order text form, one node per line:
  //   S <depth> <feature> <= <threshold>
  //   S <depth> <feature> in <hex mask>
  //   L <depth> <label> <count_0> ... <count_k>
  // Thresholds use the shortest representation that round-trips.
  std::string serialize() const;

 private:
  std::vector<TreeNode> nodes_;
  std::shared_ptr<const Schema> schema_;
  StoppingParams params_;
  std::size_t origin_chunk_index_;
};

// Greedy top-down CART with Gini impurity and binary splits. Numeric
// candidates are midpoints between consecutive distinct values; categorical
// candidates are all subsets of the categories present at the node when the
// domain has at most kExhaustiveSubsetLimit symbols, one-vs-rest otherwise.
// Split ties go to the lowest feature index, then the lowest threshold (or
// mask). Throws InputError on an invalid chunk or schema mismatch.
Tree train_cart(const Chunk& chunk, const StoppingParams& params);
Tree train_cart(const Chunk& chunk, const StoppingParams& params, const Schema& schema);

inline constexpr std::size_t kExhaustiveSubsetLimit = 6;

// Grows a subtree over `samples` whose root sits at `depth`. Node 0 of the
// result is the subtree root; child links index into the returned vector.
std::vector<TreeNode> grow_subtree(const Schema& schema, std::span<const Instance* const> samples,
                                   std::size_t depth, const StoppingParams& params);

// Candidate split evaluated at a node. Exposed for tests.
struct SplitCandidate {
  std::size_t feature = 0;
  std::variant<ThresholdTest, SubsetTest> test;
  double impurity_decrease = 0.0;
};

// Best split at a node over `samples`, or nullopt when no candidate exists.
std::optional<SplitCandidate> best_split(const Schema& schema, std::span<const Instance* const> samples);

}  // namespace dtel
