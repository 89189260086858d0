#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "epiplan/formula.hpp"

namespace epiplan {

using EventId = std::uint32_t;
using GroupId = std::uint32_t;

// One event of an action description: precondition, partial postcondition
// map (an absent atom is inertial), designated flag. canonicalize() drops
// explicit identity entries (p -> p) so the syntactic views of "identity
// postconditions" and "inertia" coincide.
struct EventSpec {
  std::string name;
  Formula pre = Formula::top();
  std::vector<std::pair<AtomId, Formula>> post;  // sorted by atom
  bool designated = false;
};

struct ObsRule {
  GroupId group;
  Formula cond;
};

// Action description with observability groups. Relations are declared per
// group; per-agent relations are resolved at instantiation time by
// evaluating each agent's observability conditions on the current state,
// first match wins. The last rule of every agent must have condition top.
struct ActionDescription {
  std::string name;
  std::vector<EventSpec> events;
  std::vector<std::string> groups;
  std::vector<std::vector<std::pair<EventId, EventId>>> group_relations;
  std::vector<std::vector<ObsRule>> observability;  // per agent, in order
  Formula global_pre = Formula::top();

  std::size_t agent_count() const { return observability.size(); }
  void canonicalize();
  // Structural checks: >=1 event, >=1 designated, valid event/group indices,
  // each agent covered by a final top-condition rule. Throws std::invalid_argument.
  void validate() const;
};

// Statically computed per-event facts: idle (precondition is the top
// literal and the postcondition map is empty) and the changed-atom sets,
// whose complement is the inertia set.
struct ActionAnalysis {
  std::vector<bool> idle;
  std::vector<std::vector<AtomId>> changed;

  bool is_inertial(EventId e, AtomId p) const;
};

ActionAnalysis analyze_action(const ActionDescription& d);

// Ground multi-pointed event model: per-agent relations, designated events,
// preconditions and (partial, inertia-completed on access) postconditions.
struct GroundAction {
  struct Event {
    Formula pre = Formula::top();
    std::vector<std::pair<AtomId, Formula>> post;  // sorted; absent = identity
    bool designated = false;
  };

  std::string name;
  std::vector<Event> events;
  std::vector<std::vector<std::vector<EventId>>> rel;  // [agent][event] -> sorted
  std::vector<EventId> designated;
  std::vector<GroupId> obs_signature;  // group matched per agent

  std::size_t agent_count() const { return rel.size(); }
  // Total postcondition: the stored formula, or the atom itself.
  Formula post_formula(EventId e, AtomId p) const;
  bool event_idle(EventId e) const {
    return events[e].pre.is_top() && events[e].post.empty();
  }
};

// Lifts group relations to agents using the observability conditions,
// evaluated on the current epistemic state through `holds`. Throws
// std::invalid_argument when some agent matches no rule.
GroundAction instantiate_action(const ActionDescription& d,
                                const std::function<bool(const Formula&)>& holds);

// Bisimulation for multi-pointed event models. Events are comparable only
// when precondition and total postconditions are syntactically equal.
bool bisimilar_actions(const GroundAction& a, const GroundAction& b);

}  // namespace epiplan
