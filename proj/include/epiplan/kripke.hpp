#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "epiplan/bitset.hpp"
#include "epiplan/events.hpp"
#include "epiplan/formula.hpp"

namespace epiplan {

using WorldId = std::uint32_t;

// M = (W, R, V): dense world ids, per-agent sorted adjacency lists and
// per-world valuation bitsets over the task atom universe. Models are
// treated as immutable once built; operations allocate fresh outputs.
class KripkeModel {
 public:
  KripkeModel() = default;
  KripkeModel(std::size_t worlds, std::size_t agents, std::size_t atoms)
      : atom_count_(atoms),
        valuations_(worlds, Bitset(atoms)),
        rel_(agents, std::vector<std::vector<WorldId>>(worlds)) {}

  std::size_t world_count() const { return valuations_.size(); }
  std::size_t agent_count() const { return rel_.size(); }
  std::size_t atom_count() const { return atom_count_; }

  const Bitset& valuation(WorldId w) const { return valuations_[w]; }
  void set_atom(WorldId w, AtomId p, bool value = true) { valuations_[w].set(p, value); }
  void set_valuation(WorldId w, Bitset v) { valuations_[w] = std::move(v); }

  void add_edge(AgentId i, WorldId from, WorldId to) { rel_[i][from].push_back(to); }
  void sort_relations();

  std::span<const WorldId> successors(AgentId i, WorldId w) const { return rel_[i][w]; }

  std::size_t edge_count() const;

 private:
  std::size_t atom_count_ = 0;
  std::vector<Bitset> valuations_;
  std::vector<std::vector<std::vector<WorldId>>> rel_;  // [agent][world]
};

// Multi-pointed Kripke model: model plus nonempty designated world set.
struct EpistemicStateK {
  KripkeModel model;
  std::vector<WorldId> designated;  // sorted
};

struct BisimWitness {
  std::vector<std::pair<WorldId, WorldId>> pairs;
};

bool eval_world(const KripkeModel& m, WorldId w, const Formula& f);
bool eval_state_k(const EpistemicStateK& s, const Formula& f);

// Largest bisimulation between the reachable parts of the two states, or
// nullopt when the designated clause fails. Both states must share the
// atom universe and agent set.
std::optional<BisimWitness> bisimilar_k(const EpistemicStateK& a, const EpistemicStateK& b);

// Bisimulation contraction: quotient of the reachable part by the largest
// auto-bisimulation. The result is bisimilar to the input and no two of its
// worlds are bisimilar to each other.
EpistemicStateK contract_k(const EpistemicStateK& s);

// True iff every designated world satisfies the precondition of some
// designated event.
bool applicable_k(const EpistemicStateK& s, const GroundAction& a);

// Product update. Postconditions are evaluated against the pre-update
// state (simultaneous assignment). Throws std::runtime_error naming the
// first failing designated world when the action is not applicable.
EpistemicStateK product_update(const EpistemicStateK& s, const GroundAction& a);

// Worlds reachable from the designated set, sorted.
std::vector<WorldId> reachable_worlds(const EpistemicStateK& s);

}  // namespace epiplan
