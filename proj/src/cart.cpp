#include "dtel/cart.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace dtel {

namespace {

__extension__ using u128 = unsigned __int128;

// Sum over children of (sum_y c_y^2) / n_child, kept as an exact fraction
// num / den so that equal-gain candidates compare equal.
struct SplitScore {
  u128 num = 0;
  u128 den = 1;

  static SplitScore make(std::uint64_t left_sq, std::uint64_t n_left, std::uint64_t right_sq,
                         std::uint64_t n_right) {
    return {static_cast<u128>(left_sq) * n_right + static_cast<u128>(right_sq) * n_left,
            static_cast<u128>(n_left) * n_right};
  }
  bool beats(const SplitScore& other) const { return num * other.den > other.num * den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

std::uint64_t sum_squares(std::span<const std::uint64_t> counts) {
  std::uint64_t s = 0;
  for (auto c : counts) s += c * c;
  return s;
}

double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  // Guard adjacent doubles: the threshold must keep `hi` on the right.
  return mid < hi ? mid : lo;
}

struct SearchState {
  std::optional<SplitScore> best_score;
  std::optional<SplitCandidate> best;

  void offer(const SplitScore& score, std::size_t feature, std::variant<ThresholdTest, SubsetTest> test) {
    if (best_score && !score.beats(*best_score)) return;
    best_score = score;
    best = SplitCandidate{feature, test, 0.0};
  }
};

void search_numeric(std::size_t feature, std::size_t num_classes, std::span<const Instance* const> samples,
                    SearchState& state) {
  std::vector<std::pair<double, Label>> column;
  column.reserve(samples.size());
  for (const Instance* s : samples) column.emplace_back(s->values[feature], s->label);
  std::sort(column.begin(), column.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (column.front().first == column.back().first) return;

  std::vector<std::uint64_t> right(num_classes, 0);
  for (const auto& [v, y] : column) ++right[y];
  std::vector<std::uint64_t> left(num_classes, 0);
  std::uint64_t left_sq = 0;
  std::uint64_t right_sq = sum_squares(right);
  const std::uint64_t n = column.size();

  for (std::uint64_t i = 0; i + 1 < n; ++i) {
    const Label y = column[i].second;
    left_sq += 2 * left[y] + 1;
    ++left[y];
    right_sq -= 2 * right[y] - 1;
    --right[y];
    if (column[i].first < column[i + 1].first) {
      state.offer(SplitScore::make(left_sq, i + 1, right_sq, n - i - 1), feature,
                  ThresholdTest{midpoint(column[i].first, column[i + 1].first)});
    }
  }
}

void search_categorical(std::size_t feature, const FeatureDescriptor& descriptor, std::size_t num_classes,
                        std::span<const Instance* const> samples, SearchState& state) {
  const std::size_t arity = descriptor.domain.size();
  std::vector<std::vector<std::uint64_t>> by_category(arity, std::vector<std::uint64_t>(num_classes, 0));
  std::vector<std::uint64_t> category_size(arity, 0);
  for (const Instance* s : samples) {
    const auto c = static_cast<std::size_t>(s->values[feature]);
    ++by_category[c][s->label];
    ++category_size[c];
  }
  std::vector<std::size_t> present;
  for (std::size_t c = 0; c < arity; ++c)
    if (category_size[c] > 0) present.push_back(c);
  if (present.size() < 2) return;

  const std::uint64_t n = samples.size();
  std::vector<std::uint64_t> total(num_classes, 0);
  for (std::size_t c : present)
    for (std::size_t y = 0; y < num_classes; ++y) total[y] += by_category[c][y];

  std::vector<std::uint64_t> left(num_classes);
  std::vector<std::uint64_t> right(num_classes);
  auto evaluate = [&](std::uint64_t mask) {
    std::fill(left.begin(), left.end(), 0);
    std::uint64_t n_left = 0;
    for (std::size_t c : present) {
      if (!((mask >> c) & 1ULL)) continue;
      n_left += category_size[c];
      for (std::size_t y = 0; y < num_classes; ++y) left[y] += by_category[c][y];
    }
    for (std::size_t y = 0; y < num_classes; ++y) right[y] = total[y] - left[y];
    state.offer(SplitScore::make(sum_squares(left), n_left, sum_squares(right), n - n_left), feature,
                SubsetTest{mask});
  };

  if (arity <= kExhaustiveSubsetLimit) {
    // Subsets of the present categories, in ascending mask order.
    const std::uint64_t limit = (1ULL << present.size()) - 1;
    for (std::uint64_t bits = 1; bits < limit; ++bits) {
      std::uint64_t mask = 0;
      for (std::size_t j = 0; j < present.size(); ++j)
        if ((bits >> j) & 1ULL) mask |= 1ULL << present[j];
      evaluate(mask);
    }
  } else {
    for (std::size_t c : present) evaluate(1ULL << c);
  }
}

std::size_t grow(const Schema& schema, std::vector<const Instance*> samples, std::size_t depth,
                 const StoppingParams& params, std::vector<TreeNode>& out) {
  std::vector<std::uint32_t> counts(schema.num_classes, 0);
  for (const Instance* s : samples) ++counts[s->label];
  const std::size_t index = out.size();
  out.push_back(TreeNode{depth, make_leaf(counts)});

  const auto non_zero = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; });
  if (non_zero <= 1) return index;
  if (samples.size() < params.min_samples_split) return index;
  if (params.max_depth && depth >= *params.max_depth) return index;

  const auto split = best_split(schema, samples);
  if (!split || split->impurity_decrease < params.min_impurity_decrease) return index;

  InternalNode node{split->feature, split->test, 0, 0};
  std::vector<const Instance*> left;
  std::vector<const Instance*> right;
  for (const Instance* s : samples) (node.goes_left(*s) ? left : right).push_back(s);
  samples.clear();
  samples.shrink_to_fit();

  node.left = grow(schema, std::move(left), depth + 1, params, out);
  node.right = grow(schema, std::move(right), depth + 1, params, out);
  out[index].body = node;
  return index;
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

void serialize_node(const Tree& tree, std::size_t index, std::string& out) {
  const TreeNode& node = tree.node(index);
  if (node.is_leaf()) {
    const auto& leaf = node.leaf();
    out += "L " + std::to_string(node.depth) + " " + std::to_string(leaf.predicted_label);
    for (auto c : leaf.class_counts) out += " " + std::to_string(c);
    out += '\n';
    return;
  }
  const auto& split = node.internal();
  out += "S " + std::to_string(node.depth) + " " + std::to_string(split.feature);
  if (const auto* t = std::get_if<ThresholdTest>(&split.test)) {
    out += " <= ";
    append_double(out, t->threshold);
  } else {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, std::get<SubsetTest>(split.test).left_mask, 16);
    out += " in ";
    out.append(buf, end);
  }
  out += '\n';
  serialize_node(tree, split.left, out);
  serialize_node(tree, split.right, out);
}

}  // namespace

void StoppingParams::validate() const {
  if (min_samples_split < 1) throw InputError("min_samples_split must be positive");
  if (max_depth && *max_depth < 1) throw InputError("max_depth must be positive");
  if (!(min_impurity_decrease >= 0.0)) throw InputError("min_impurity_decrease must be non-negative");
}

bool InternalNode::goes_left(const Instance& instance) const {
  const double v = instance.values[feature];
  if (const auto* t = std::get_if<ThresholdTest>(&test)) return v <= t->threshold;
  const auto code = static_cast<std::uint64_t>(v);
  return code < kMaxCategories && ((std::get<SubsetTest>(test).left_mask >> code) & 1ULL);
}

std::uint64_t LeafNode::total() const {
  return std::accumulate(class_counts.begin(), class_counts.end(), std::uint64_t{0});
}

LeafNode make_leaf(std::vector<std::uint32_t> counts) {
  const Label label = argmax_lowest(std::span<const std::uint32_t>(counts));
  return LeafNode{std::move(counts), label};
}

Tree::Tree(std::vector<TreeNode> nodes, std::shared_ptr<const Schema> schema, StoppingParams params,
           std::size_t origin_chunk_index)
    : nodes_(std::move(nodes)),
      schema_(std::move(schema)),
      params_(params),
      origin_chunk_index_(origin_chunk_index) {
  if (nodes_.empty()) throw std::logic_error("tree without nodes");
  if (!schema_) throw std::logic_error("tree without schema");
}

std::size_t Tree::route_to_leaf(const Instance& instance) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& split = nodes_[i].internal();
    i = split.goes_left(instance) ? split.left : split.right;
  }
  return i;
}

ClassDistribution Tree::posterior(const Instance& instance) const {
  const auto& counts = leaf_for(instance).class_counts;
  return ClassDistribution::from_counts(std::span<const std::uint32_t>(counts));
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::string Tree::serialize() const {
  std::string out;
  serialize_node(*this, 0, out);
  return out;
}

std::optional<SplitCandidate> best_split(const Schema& schema, std::span<const Instance* const> samples) {
  if (samples.size() < 2) return std::nullopt;
  SearchState state;
  for (std::size_t f = 0; f < schema.num_features(); ++f) {
    const auto& fd = schema.features[f];
    if (fd.is_categorical())
      search_categorical(f, fd, schema.num_classes, samples, state);
    else
      search_numeric(f, schema.num_classes, samples, state);
  }
  if (!state.best) return std::nullopt;

  std::vector<std::uint64_t> counts(schema.num_classes, 0);
  for (const Instance* s : samples) ++counts[s->label];
  const double n = static_cast<double>(samples.size());
  const double parent = static_cast<double>(sum_squares(counts)) / n;
  state.best->impurity_decrease = std::max(0.0, (state.best_score->value() - parent) / n);
  return state.best;
}

std::vector<TreeNode> grow_subtree(const Schema& schema, std::span<const Instance* const> samples,
                                   std::size_t depth, const StoppingParams& params) {
  if (samples.empty()) throw std::logic_error("grow_subtree on empty sample set");
  std::vector<TreeNode> out;
  grow(schema, std::vector<const Instance*>(samples.begin(), samples.end()), depth, params, out);
  return out;
}

Tree train_cart(const Chunk& chunk, const StoppingParams& params) {
  validate_chunk(chunk);
  chunk.schema->validate();
  params.validate();
  std::vector<const Instance*> samples;
  samples.reserve(chunk.size());
  for (const auto& inst : chunk) samples.push_back(&inst);
  return Tree(grow_subtree(*chunk.schema, samples, 0, params), chunk.schema, params, chunk.index);
}

Tree train_cart(const Chunk& chunk, const StoppingParams& params, const Schema& schema) {
  validate_chunk(chunk, schema);
  return train_cart(chunk, params);
}

}  // namespace dtel
