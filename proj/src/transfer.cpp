#include "dtel/transfer.hpp"

namespace dtel {

AdaptedTree transfer_tree(std::shared_ptr<const Tree> source, const Chunk& chunk, const StoppingParams& params) {
  if (!source) throw std::logic_error("transfer_tree without source");
  validate_chunk(chunk, source->schema());
  params.validate();

  const auto& src_nodes = source->nodes();
  std::vector<std::vector<const Instance*>> routed(src_nodes.size());
  for (const auto& inst : chunk) routed[source->route_to_leaf(inst)].push_back(&inst);

  std::vector<TreeNode> nodes(src_nodes.begin(), src_nodes.end());
  const Schema& schema = source->schema();
  for (std::size_t leaf = 0; leaf < src_nodes.size(); ++leaf) {
    if (routed[leaf].empty()) continue;  // keeps its historical counts
    auto subtree = grow_subtree(schema, routed[leaf], src_nodes[leaf].depth, params);
    // Subtree node k > 0 lands at base + k - 1; node 0 replaces the leaf.
    const std::size_t base = nodes.size();
    auto remap = [&](std::size_t k) { return k == 0 ? leaf : base + k - 1; };
    for (auto& n : subtree) {
      if (n.is_leaf()) continue;
      auto& split = n.internal();
      split.left = remap(split.left);
      split.right = remap(split.right);
    }
    nodes[leaf] = std::move(subtree.front());
    for (std::size_t k = 1; k < subtree.size(); ++k) nodes.push_back(std::move(subtree[k]));
  }

  auto tree = std::make_shared<const Tree>(std::move(nodes), source->schema_ptr(), params, source->origin_chunk_index());
  return AdaptedTree{std::move(tree), std::move(source), chunk.index};
}

double accuracy(const Tree& tree, const Chunk& chunk) {
  if (chunk.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& inst : chunk) correct += tree.predict(inst) == inst.label;
  return static_cast<double>(correct) / static_cast<double>(chunk.size());
}

double adapted_training_accuracy(const AdaptedTree& adapted, const Chunk& chunk) {
  return accuracy(*adapted.tree, chunk);
}

}  // namespace dtel
