#include "epiplan/kripke.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "epiplan/refine.hpp"

namespace epiplan {

void KripkeModel::sort_relations() {
  for (auto& per_agent : rel_) {
    for (auto& succs : per_agent) {
      std::sort(succs.begin(), succs.end());
      succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
    }
  }
}

std::size_t KripkeModel::edge_count() const {
  std::size_t n = 0;
  for (const auto& per_agent : rel_) {
    for (const auto& succs : per_agent) n += succs.size();
  }
  return n;
}

bool eval_world(const KripkeModel& m, WorldId w, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::top:
      return true;
    case FormulaKind::atom:
      return m.valuation(w).test(f.atom_id());
    case FormulaKind::neg:
      return !eval_world(m, w, f.lhs());
    case FormulaKind::conj:
      return eval_world(m, w, f.lhs()) && eval_world(m, w, f.rhs());
    case FormulaKind::box: {
      for (WorldId v : m.successors(f.agent(), w)) {
        if (!eval_world(m, v, f.lhs())) return false;
      }
      return true;
    }
    case FormulaKind::dia: {
      for (WorldId v : m.successors(f.agent(), w)) {
        if (eval_world(m, v, f.lhs())) return true;
      }
      return false;
    }
  }
  return false;
}

bool eval_state_k(const EpistemicStateK& s, const Formula& f) {
  for (WorldId w : s.designated) {
    if (!eval_world(s.model, w, f)) return false;
  }
  return true;
}

std::vector<WorldId> reachable_worlds(const EpistemicStateK& s) {
  std::vector<bool> seen(s.model.world_count(), false);
  std::vector<WorldId> stack(s.designated.begin(), s.designated.end());
  for (WorldId w : stack) seen[w] = true;
  while (!stack.empty()) {
    const WorldId w = stack.back();
    stack.pop_back();
    for (std::size_t i = 0; i < s.model.agent_count(); ++i) {
      for (WorldId v : s.model.successors(static_cast<AgentId>(i), w)) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  std::vector<WorldId> out;
  for (WorldId w = 0; w < seen.size(); ++w) {
    if (seen[w]) out.push_back(w);
  }
  return out;
}

namespace {

// Canonical initial classes by valuation: rank within the sorted set of
// distinct valuation bitsets present among the given worlds.
std::vector<std::uint32_t> valuation_classes(
    const std::vector<const Bitset*>& valuations) {
  std::vector<const Bitset*> distinct = valuations;
  std::sort(distinct.begin(), distinct.end(),
            [](const Bitset* a, const Bitset* b) { return *a < *b; });
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](const Bitset* a, const Bitset* b) { return *a == *b; }),
                 distinct.end());
  std::vector<std::uint32_t> out(valuations.size());
  for (std::size_t i = 0; i < valuations.size(); ++i) {
    const auto it =
        std::lower_bound(distinct.begin(), distinct.end(), valuations[i],
                         [](const Bitset* a, const Bitset* b) { return *a < *b; });
    out[i] = static_cast<std::uint32_t>(it - distinct.begin());
  }
  return out;
}

}  // namespace

std::optional<BisimWitness> bisimilar_k(const EpistemicStateK& a,
                                        const EpistemicStateK& b) {
  if (a.model.atom_count() != b.model.atom_count() ||
      a.model.agent_count() != b.model.agent_count()) {
    throw std::invalid_argument("bisimilar_k: vocabulary mismatch");
  }
  const std::vector<WorldId> reach_a = reachable_worlds(a);
  const std::vector<WorldId> reach_b = reachable_worlds(b);

  // Disjoint union of the reachable parts; dense local ids.
  std::vector<std::int64_t> local_a(a.model.world_count(), -1);
  std::vector<std::int64_t> local_b(b.model.world_count(), -1);
  std::vector<const Bitset*> vals;
  for (WorldId w : reach_a) {
    local_a[w] = static_cast<std::int64_t>(vals.size());
    vals.push_back(&a.model.valuation(w));
  }
  for (WorldId w : reach_b) {
    local_b[w] = static_cast<std::int64_t>(vals.size());
    vals.push_back(&b.model.valuation(w));
  }
  const std::size_t split = reach_a.size();
  const std::size_t total = vals.size();
  const std::size_t agents = a.model.agent_count();

  std::vector<std::vector<std::vector<std::uint32_t>>> adj(
      agents, std::vector<std::vector<std::uint32_t>>(total));
  for (std::size_t i = 0; i < agents; ++i) {
    for (WorldId w : reach_a) {
      for (WorldId v : a.model.successors(static_cast<AgentId>(i), w)) {
        adj[i][local_a[w]].push_back(static_cast<std::uint32_t>(local_a[v]));
      }
    }
    for (WorldId w : reach_b) {
      for (WorldId v : b.model.successors(static_cast<AgentId>(i), w)) {
        adj[i][local_b[w]].push_back(static_cast<std::uint32_t>(local_b[v]));
      }
    }
  }

  const auto succ = [&](std::size_t agent, std::uint32_t v) -> std::span<const std::uint32_t> {
    return adj[agent][v];
  };
  const auto classes = refine_partition(total, agents, succ, valuation_classes(vals));

  for (WorldId w : a.designated) {
    bool matched = false;
    for (WorldId v : b.designated) {
      if (classes[local_a[w]] == classes[local_b[v]]) {
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }
  for (WorldId v : b.designated) {
    bool matched = false;
    for (WorldId w : a.designated) {
      if (classes[local_a[w]] == classes[local_b[v]]) {
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }

  BisimWitness witness;
  for (WorldId w : reach_a) {
    for (WorldId v : reach_b) {
      if (classes[local_a[w]] == classes[local_b[v]]) {
        witness.pairs.emplace_back(w, v);
      }
    }
  }
  return witness;
}

EpistemicStateK contract_k(const EpistemicStateK& s) {
  const std::vector<WorldId> reach = reachable_worlds(s);
  std::vector<std::int64_t> local(s.model.world_count(), -1);
  std::vector<const Bitset*> vals;
  for (WorldId w : reach) {
    local[w] = static_cast<std::int64_t>(vals.size());
    vals.push_back(&s.model.valuation(w));
  }
  const std::size_t agents = s.model.agent_count();

  std::vector<std::vector<std::vector<std::uint32_t>>> adj(
      agents, std::vector<std::vector<std::uint32_t>>(reach.size()));
  for (std::size_t i = 0; i < agents; ++i) {
    for (WorldId w : reach) {
      for (WorldId v : s.model.successors(static_cast<AgentId>(i), w)) {
        adj[i][local[w]].push_back(static_cast<std::uint32_t>(local[v]));
      }
    }
  }
  const auto succ = [&](std::size_t agent, std::uint32_t v) -> std::span<const std::uint32_t> {
    return adj[agent][v];
  };
  const auto classes =
      refine_partition(reach.size(), agents, succ, valuation_classes(vals));
  const std::uint32_t block_count =
      classes.empty() ? 0 : 1 + *std::max_element(classes.begin(), classes.end());

  // One representative world per block; Forth/Back make the choice immaterial.
  std::vector<std::uint32_t> rep(block_count, 0);
  std::vector<bool> have(block_count, false);
  for (std::size_t k = 0; k < reach.size(); ++k) {
    if (!have[classes[k]]) {
      have[classes[k]] = true;
      rep[classes[k]] = static_cast<std::uint32_t>(k);
    }
  }

  EpistemicStateK out;
  out.model = KripkeModel(block_count, agents, s.model.atom_count());
  for (std::uint32_t b = 0; b < block_count; ++b) {
    out.model.set_valuation(b, s.model.valuation(reach[rep[b]]));
    for (std::size_t i = 0; i < agents; ++i) {
      for (std::uint32_t v : adj[i][rep[b]]) {
        out.model.add_edge(static_cast<AgentId>(i), b, classes[v]);
      }
    }
  }
  out.model.sort_relations();
  for (WorldId w : s.designated) out.designated.push_back(classes[local[w]]);
  std::sort(out.designated.begin(), out.designated.end());
  out.designated.erase(std::unique(out.designated.begin(), out.designated.end()),
                       out.designated.end());
  return out;
}

bool applicable_k(const EpistemicStateK& s, const GroundAction& a) {
  for (WorldId w : s.designated) {
    bool covered = false;
    for (EventId e : a.designated) {
      if (eval_world(s.model, w, a.events[e].pre)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

EpistemicStateK product_update(const EpistemicStateK& s, const GroundAction& a) {
  for (WorldId w : s.designated) {
    bool covered = false;
    for (EventId e : a.designated) {
      if (eval_world(s.model, w, a.events[e].pre)) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      throw std::runtime_error("product_update: action '" + a.name +
                               "' not applicable, designated world " +
                               std::to_string(w) + " satisfies no designated precondition");
    }
  }

  const std::size_t worlds = s.model.world_count();
  const std::size_t nevents = a.events.size();
  const std::size_t agents = s.model.agent_count();

  // W' = {(w,e) | (M,w) |= pre(e)}, indexed densely.
  std::vector<std::int64_t> index(worlds * nevents, -1);
  std::vector<std::pair<WorldId, EventId>> pairs;
  for (WorldId w = 0; w < worlds; ++w) {
    for (EventId e = 0; e < nevents; ++e) {
      if (eval_world(s.model, w, a.events[e].pre)) {
        index[w * nevents + e] = static_cast<std::int64_t>(pairs.size());
        pairs.emplace_back(w, e);
      }
    }
  }

  EpistemicStateK out;
  out.model = KripkeModel(pairs.size(), agents, s.model.atom_count());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [w, e] = pairs[k];
    // V'(p): postconditions read the pre-update world.
    Bitset val = s.model.valuation(w);
    for (const auto& [p, f] : a.events[e].post) {
      val.set(p, eval_world(s.model, w, f));
    }
    out.model.set_valuation(static_cast<WorldId>(k), std::move(val));
    for (std::size_t i = 0; i < agents; ++i) {
      for (WorldId v : s.model.successors(static_cast<AgentId>(i), w)) {
        for (EventId f : a.rel[i][e]) {
          const std::int64_t target = index[v * nevents + f];
          if (target >= 0) {
            out.model.add_edge(static_cast<AgentId>(i), static_cast<WorldId>(k),
                               static_cast<WorldId>(target));
          }
        }
      }
    }
  }
  out.model.sort_relations();

  for (WorldId w : s.designated) {
    for (EventId e : a.designated) {
      const std::int64_t target = index[w * nevents + e];
      if (target >= 0) out.designated.push_back(static_cast<WorldId>(target));
    }
  }
  std::sort(out.designated.begin(), out.designated.end());
  out.designated.erase(std::unique(out.designated.begin(), out.designated.end()),
                       out.designated.end());
  return out;
}

}  // namespace epiplan
