#include "epiplan/events.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>

#include "epiplan/refine.hpp"

namespace epiplan {

void ActionDescription::canonicalize() {
  for (auto& e : events) {
    auto& post = e.post;
    post.erase(std::remove_if(post.begin(), post.end(),
                              [](const auto& entry) {
                                return entry.second == Formula::atom(entry.first);
                              }),
               post.end());
    std::sort(post.begin(), post.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  for (auto& rel : group_relations) std::sort(rel.begin(), rel.end());
}

void ActionDescription::validate() const {
  if (events.empty()) {
    throw std::invalid_argument("action '" + name + "' has no events");
  }
  if (std::none_of(events.begin(), events.end(),
                   [](const EventSpec& e) { return e.designated; })) {
    throw std::invalid_argument("action '" + name + "' has no designated event");
  }
  for (const auto& rel : group_relations) {
    for (const auto& [from, to] : rel) {
      if (from >= events.size() || to >= events.size()) {
        throw std::invalid_argument("action '" + name + "' relation references unknown event");
      }
    }
  }
  for (std::size_t i = 0; i < observability.size(); ++i) {
    const auto& rules = observability[i];
    if (rules.empty() || !rules.back().cond.is_top()) {
      throw std::invalid_argument("action '" + name + "': agent #" + std::to_string(i) +
                                  " lacks a final top-condition observability rule");
    }
    for (const auto& rule : rules) {
      if (rule.group >= groups.size()) {
        throw std::invalid_argument("action '" + name + "' references unknown group");
      }
    }
  }
}

bool ActionAnalysis::is_inertial(EventId e, AtomId p) const {
  const auto& c = changed[e];
  return !std::binary_search(c.begin(), c.end(), p);
}

ActionAnalysis analyze_action(const ActionDescription& d) {
  ActionAnalysis out;
  out.idle.reserve(d.events.size());
  out.changed.reserve(d.events.size());
  for (const auto& e : d.events) {
    out.idle.push_back(e.pre.is_top() && e.post.empty());
    std::vector<AtomId> atoms;
    atoms.reserve(e.post.size());
    for (const auto& [p, f] : e.post) atoms.push_back(p);
    out.changed.push_back(std::move(atoms));
  }
  return out;
}

Formula GroundAction::post_formula(EventId e, AtomId p) const {
  const auto& post = events[e].post;
  const auto it = std::lower_bound(
      post.begin(), post.end(), p,
      [](const auto& entry, AtomId atom) { return entry.first < atom; });
  if (it != post.end() && it->first == p) return it->second;
  return Formula::atom(p);
}

GroundAction instantiate_action(const ActionDescription& d,
                                const std::function<bool(const Formula&)>& holds) {
  GroundAction out;
  out.name = d.name;
  out.events.reserve(d.events.size());
  for (const auto& e : d.events) {
    out.events.push_back({e.pre, e.post, e.designated});
    if (e.designated) out.designated.push_back(static_cast<EventId>(out.events.size() - 1));
  }

  out.rel.resize(d.agent_count());
  out.obs_signature.resize(d.agent_count());
  for (std::size_t agent = 0; agent < d.agent_count(); ++agent) {
    const ObsRule* match = nullptr;
    for (const auto& rule : d.observability[agent]) {
      if (rule.cond.is_top() || holds(rule.cond)) {
        match = &rule;
        break;
      }
    }
    if (match == nullptr) {
      throw std::invalid_argument("action '" + d.name + "': no observability group matches agent #" +
                                  std::to_string(agent));
    }
    out.obs_signature[agent] = match->group;
    auto& rel = out.rel[agent];
    rel.assign(d.events.size(), {});
    for (const auto& [from, to] : d.group_relations[match->group]) {
      rel[from].push_back(to);
    }
    for (auto& succs : rel) {
      std::sort(succs.begin(), succs.end());
      succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
    }
  }
  return out;
}

bool bisimilar_actions(const GroundAction& a, const GroundAction& b) {
  if (a.agent_count() != b.agent_count()) return false;
  const std::size_t n = a.events.size();
  const std::size_t total = n + b.events.size();
  const std::size_t agents = a.agent_count();

  // Initial classes keyed by syntactic (pre, post) equality across the
  // disjoint union; refinement then enforces Forth/Back.
  std::vector<std::uint32_t> initial(total);
  std::vector<std::pair<const GroundAction::Event*, std::uint32_t>> keys;
  auto key_of = [&](const GroundAction::Event& e) -> std::uint32_t {
    for (auto& [other, id] : keys) {
      if (other->pre == e.pre && other->post.size() == e.post.size()) {
        bool same = true;
        for (std::size_t k = 0; k < e.post.size(); ++k) {
          if (other->post[k].first != e.post[k].first ||
              !(other->post[k].second == e.post[k].second)) {
            same = false;
            break;
          }
        }
        if (same) return id;
      }
    }
    keys.emplace_back(&e, static_cast<std::uint32_t>(keys.size()));
    return keys.back().second;
  };
  for (std::size_t i = 0; i < n; ++i) initial[i] = key_of(a.events[i]);
  for (std::size_t i = 0; i < b.events.size(); ++i) initial[n + i] = key_of(b.events[i]);

  const auto succ = [&](std::size_t agent, std::uint32_t v) -> std::span<const std::uint32_t> {
    if (v < n) return a.rel[agent][v];
    return b.rel[agent][v - n];
  };
  const auto classes = refine_partition(total, agents, succ, std::move(initial));

  for (EventId e : a.designated) {
    bool matched = false;
    for (EventId f : b.designated) {
      if (classes[e] == classes[n + f]) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  for (EventId f : b.designated) {
    bool matched = false;
    for (EventId e : a.designated) {
      if (classes[e] == classes[n + f]) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace epiplan
