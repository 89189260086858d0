#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "epiplan/bitset.hpp"
#include "epiplan/events.hpp"
#include "epiplan/formula.hpp"
#include "epiplan/kripke.hpp"

namespace epiplan {

using PossId = std::uint32_t;
using EvtId = std::uint32_t;

inline constexpr std::uint32_t kNoEvent = 0xffffffffu;

// Identity of a possibility: the step it was created at plus what was
// updated by what. Initial nodes (time 0) carry the decorated world index
// in `parent` and kNoEvent in `event`. Within one store, (time, parent,
// event) uniquely identifies a node.
struct OriginKey {
  std::uint32_t time = 0;
  std::uint32_t parent = 0;
  std::uint32_t event = kNoEvent;
};

// Arena of possibility nodes. Info edges may form cycles; nodes are built
// in two phases (allocate with the valuation, patch info edges) and are
// immutable once their update call returns. The store also memoizes
// (time, parent, event) -> node so one update step builds each shared
// sub-possibility once and sibling search branches at the same step reuse
// each other's work.
class PossibilityStore {
 public:
  struct Node {
    Bitset valuation;
    std::vector<std::vector<PossId>> info;  // per agent, sorted
    OriginKey origin;
  };

  PossibilityStore(std::size_t agents, std::size_t atoms)
      : agent_count_(agents), atom_count_(atoms) {}

  std::size_t size() const { return nodes_.size(); }
  std::size_t agent_count() const { return agent_count_; }
  std::size_t atom_count() const { return atom_count_; }
  const Node& node(PossId u) const { return nodes_[u]; }

  PossId add_node(Bitset valuation, OriginKey origin);
  void set_info(PossId u, AgentId i, std::vector<PossId> succs);

  std::optional<PossId> find_update(std::uint32_t time, PossId parent, EvtId event) const;
  void remember_update(std::uint32_t time, PossId parent, EvtId event, PossId result);

  // Redirects references among nodes at or above tail_start through
  // `target` (identity elsewhere); used by contract_tail. Dropped nodes
  // stay in the arena but become unreferenced.
  void remap_tail(std::size_t tail_start, const std::vector<PossId>& target);

  std::size_t edge_count() const;

 private:
  struct MemoKey {
    std::uint32_t time;
    PossId parent;
    EvtId event;
    bool operator==(const MemoKey&) const = default;
  };
  struct MemoKeyHash {
    std::size_t operator()(const MemoKey& k) const {
      std::uint64_t h = k.time;
      h = h * 0x9e3779b97f4a7c15ull + k.parent;
      h = h * 0x9e3779b97f4a7c15ull + k.event;
      return static_cast<std::size_t>(h ^ (h >> 32));
    }
  };

  std::size_t agent_count_;
  std::size_t atom_count_;
  std::vector<Node> nodes_;
  std::unordered_map<MemoKey, PossId, MemoKeyHash> memo_;
};

// Epistemic state on the possibility side: a store reference plus the
// nonempty designated node set.
struct PossibilitySpectrum {
  const PossibilityStore* store = nullptr;
  std::vector<PossId> designated;  // sorted
};

// Arena of eventualities: the action-side mirror of PossibilityStore. The
// `pre` formula is the value of the precondition pseudo-atom and lives
// outside the ordinary atom universe.
class EventualityStore {
 public:
  struct Node {
    Formula pre = Formula::top();
    std::vector<std::pair<AtomId, Formula>> post;  // sorted; absent = identity
    std::vector<std::vector<EvtId>> info;          // per agent, sorted
    bool idle = false;      // pre is the top literal, post map empty
    bool reusable = false;  // hereditarily idle: u (+) e == u for every u
  };

  explicit EventualityStore(std::size_t agents) : agent_count_(agents) {}

  std::size_t size() const { return nodes_.size(); }
  std::size_t agent_count() const { return agent_count_; }
  const Node& node(EvtId e) const { return nodes_[e]; }

  EvtId add_node(Formula pre, std::vector<std::pair<AtomId, Formula>> post);
  void set_info(EvtId e, AgentId i, std::vector<EvtId> succs);
  // Recomputes idle/reusable flags; call after a batch of nodes is wired.
  void refresh_flags();

  Formula post_formula(EvtId e, AtomId p) const;

 private:
  std::size_t agent_count_;
  std::vector<Node> nodes_;
};

struct EventualitySpectrum {
  const EventualityStore* store = nullptr;
  std::vector<EvtId> designated;  // sorted
};

// Truth over possibilities: recursion on formula structure only, so cycles
// in the info edges are harmless.
bool eval_p(const PossibilityStore& s, PossId u, const Formula& f);
bool eval_spectrum(const PossibilitySpectrum& u, const Formula& f);

// Decoration: one node per world reachable from the designated set; the
// spectrum holds the images of the designated worlds (the solution of s).
PossibilitySpectrum decorate_state(PossibilityStore& store, const EpistemicStateK& s);

// Picture: fresh MPKM with one world per node reachable from the spectrum.
EpistemicStateK picture_state(const PossibilitySpectrum& u);

// Action-side decoration/picture.
EventualitySpectrum decorate_action(EventualityStore& store, const GroundAction& a);
GroundAction picture_action(const EventualitySpectrum& e, std::size_t atom_count);

bool applicable_p(const PossibilitySpectrum& u, const EventualitySpectrum& e);

// Union update at the given step. New nodes are memoized per (step, parent,
// eventuality); updating by a hereditarily idle eventuality returns the
// parent's existing id without allocation, which is what lets later states
// point back into earlier ones.
PossibilitySpectrum union_update(PossibilityStore& s, const PossibilitySpectrum& u,
                                 const EventualitySpectrum& e, std::uint32_t step);

// Canonical byte string of the spectrum's information content: the
// reachable sub-store is contracted by partition refinement and serialized
// with canonical block numbering. Two spectrums over the same vocabulary
// get equal keys iff their pictures are bisimilar.
std::string canonical_key(const PossibilitySpectrum& u);

// (reachable possibility count, reachable info edge count).
std::pair<std::size_t, std::size_t> count_nodes(const PossibilitySpectrum& u);

// Optional post-update contraction: merges nodes at or above `tail_start`
// (the current update's freshly built suffix, nothing else may reference
// them yet) into bisimilar nodes of the sealed prefix or into each other.
PossibilitySpectrum contract_tail(PossibilityStore& s, std::size_t tail_start,
                                  const PossibilitySpectrum& u);

std::vector<PossId> reachable_nodes(const PossibilitySpectrum& u);

}  // namespace epiplan
