#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace epiplan {

using SuccFn =
    std::function<std::span<const std::uint32_t>(std::size_t agent, std::uint32_t node)>;

// Coarsest partition refinement over a finite multi-relation graph.
//
// Nodes are 0..node_count-1, relations 0..agent_count-1; succ(i, v) yields
// v's successors under relation i. `initial` assigns a starting class per
// node and must itself be canonical, i.e. derived from data invariant under
// isomorphism (valuation rank, syntactic event keys, ...).
//
// Each round rekeys every node by (current class, per-relation sorted set of
// successor classes), orders the distinct keys lexicographically and
// renumbers; rounds repeat until the partition is stable. The result is one
// class id per node, contiguous from 0. Because the schedule depends only on
// the keys, two isomorphic inputs with matching initial classes receive
// matching output classes, which makes the ids usable for canonical
// serialization.
std::vector<std::uint32_t> refine_partition(std::size_t node_count,
                                            std::size_t agent_count,
                                            const SuccFn& succ,
                                            std::vector<std::uint32_t> initial);

}  // namespace epiplan
