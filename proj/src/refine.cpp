#include "epiplan/refine.hpp"

#include <algorithm>
#include <numeric>

namespace epiplan {

namespace {

struct NodeKey {
  std::uint32_t current;
  std::vector<std::vector<std::uint32_t>> succ_classes;  // per relation, sorted unique

  friend bool operator<(const NodeKey& a, const NodeKey& b) {
    if (a.current != b.current) return a.current < b.current;
    return a.succ_classes < b.succ_classes;
  }
  friend bool operator==(const NodeKey& a, const NodeKey& b) = default;
};

}  // namespace

std::vector<std::uint32_t> refine_partition(std::size_t node_count,
                                            std::size_t agent_count,
                                            const SuccFn& succ,
                                            std::vector<std::uint32_t> initial) {
  if (node_count == 0) return {};
  std::vector<std::uint32_t> classes = std::move(initial);
  std::size_t class_count =
      classes.empty() ? 0 : 1 + *std::max_element(classes.begin(), classes.end());

  while (true) {
    std::vector<NodeKey> keys(node_count);
    for (std::uint32_t v = 0; v < node_count; ++v) {
      keys[v].current = classes[v];
      keys[v].succ_classes.resize(agent_count);
      for (std::size_t i = 0; i < agent_count; ++i) {
        auto& cs = keys[v].succ_classes[i];
        for (std::uint32_t w : succ(i, v)) cs.push_back(classes[w]);
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      }
    }

    std::vector<std::uint32_t> order(node_count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return keys[a] < keys[b];
    });

    std::vector<std::uint32_t> next(node_count);
    std::uint32_t next_count = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k > 0 && !(keys[order[k - 1]] == keys[order[k]])) ++next_count;
      next[order[k]] = next_count;
    }
    ++next_count;

    const bool stable = next_count == class_count;
    classes = std::move(next);
    class_count = next_count;
    // Refinement only ever splits classes, so an unchanged count means the
    // partition is stable; the final renumbering is the canonical one.
    if (stable) break;
  }
  return classes;
}

}  // namespace epiplan
