#include "epiplan/possibility.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <span>
#include <stdexcept>

#include "epiplan/refine.hpp"

namespace epiplan {

PossId PossibilityStore::add_node(Bitset valuation, OriginKey origin) {
  Node n;
  n.valuation = std::move(valuation);
  n.info.resize(agent_count_);
  n.origin = origin;
  nodes_.push_back(std::move(n));
  return static_cast<PossId>(nodes_.size() - 1);
}

void PossibilityStore::set_info(PossId u, AgentId i, std::vector<PossId> succs) {
  std::sort(succs.begin(), succs.end());
  succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
  nodes_[u].info[i] = std::move(succs);
}

std::optional<PossId> PossibilityStore::find_update(std::uint32_t time, PossId parent,
                                                    EvtId event) const {
  const auto it = memo_.find(MemoKey{time, parent, event});
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

void PossibilityStore::remember_update(std::uint32_t time, PossId parent, EvtId event,
                                       PossId result) {
  memo_[MemoKey{time, parent, event}] = result;
}

void PossibilityStore::remap_tail(std::size_t tail_start,
                                  const std::vector<PossId>& target) {
  for (std::size_t v = tail_start; v < nodes_.size(); ++v) {
    if (target[v] != v) continue;  // dropped nodes keep stale edges, unreferenced
    for (auto& succs : nodes_[v].info) {
      for (PossId& w : succs) w = target[w];
      std::sort(succs.begin(), succs.end());
      succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
    }
  }
  for (auto& [key, value] : memo_) value = target[value];
}

std::size_t PossibilityStore::edge_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes_) {
    for (const auto& succs : node.info) n += succs.size();
  }
  return n;
}

EvtId EventualityStore::add_node(Formula pre,
                                 std::vector<std::pair<AtomId, Formula>> post) {
  Node n;
  n.pre = std::move(pre);
  std::sort(post.begin(), post.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  post.erase(std::remove_if(post.begin(), post.end(),
                            [](const auto& entry) {
                              return entry.second == Formula::atom(entry.first);
                            }),
             post.end());
  n.post = std::move(post);
  n.info.resize(agent_count_);
  nodes_.push_back(std::move(n));
  return static_cast<EvtId>(nodes_.size() - 1);
}

void EventualityStore::set_info(EvtId e, AgentId i, std::vector<EvtId> succs) {
  std::sort(succs.begin(), succs.end());
  succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
  nodes_[e].info[i] = std::move(succs);
}

void EventualityStore::refresh_flags() {
  for (auto& n : nodes_) {
    n.idle = n.pre.is_top() && n.post.empty();
  }
  // reusable = greatest fixpoint of: idle, every info set nonempty, all
  // info successors reusable. For such e, u (+) e literally equals u.
  for (auto& n : nodes_) {
    n.reusable = n.idle;
    for (const auto& succs : n.info) {
      if (succs.empty()) n.reusable = false;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& n : nodes_) {
      if (!n.reusable) continue;
      for (const auto& succs : n.info) {
        for (EvtId f : succs) {
          if (!nodes_[f].reusable) {
            n.reusable = false;
            changed = true;
            break;
          }
        }
        if (!n.reusable) break;
      }
    }
  }
}

Formula EventualityStore::post_formula(EvtId e, AtomId p) const {
  const auto& post = nodes_[e].post;
  const auto it = std::lower_bound(
      post.begin(), post.end(), p,
      [](const auto& entry, AtomId atom) { return entry.first < atom; });
  if (it != post.end() && it->first == p) return it->second;
  return Formula::atom(p);
}

bool eval_p(const PossibilityStore& s, PossId u, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::top:
      return true;
    case FormulaKind::atom:
      return s.node(u).valuation.test(f.atom_id());
    case FormulaKind::neg:
      return !eval_p(s, u, f.lhs());
    case FormulaKind::conj:
      return eval_p(s, u, f.lhs()) && eval_p(s, u, f.rhs());
    case FormulaKind::box: {
      for (PossId v : s.node(u).info[f.agent()]) {
        if (!eval_p(s, v, f.lhs())) return false;
      }
      return true;
    }
    case FormulaKind::dia: {
      for (PossId v : s.node(u).info[f.agent()]) {
        if (eval_p(s, v, f.lhs())) return true;
      }
      return false;
    }
  }
  return false;
}

bool eval_spectrum(const PossibilitySpectrum& u, const Formula& f) {
  for (PossId v : u.designated) {
    if (!eval_p(*u.store, v, f)) return false;
  }
  return true;
}

std::vector<PossId> reachable_nodes(const PossibilitySpectrum& u) {
  std::vector<bool> seen(u.store->size(), false);
  std::vector<PossId> stack(u.designated.begin(), u.designated.end());
  for (PossId v : stack) seen[v] = true;
  while (!stack.empty()) {
    const PossId v = stack.back();
    stack.pop_back();
    for (const auto& succs : u.store->node(v).info) {
      for (PossId w : succs) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  std::vector<PossId> out;
  for (PossId v = 0; v < seen.size(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

PossibilitySpectrum decorate_state(PossibilityStore& store, const EpistemicStateK& s) {
  if (store.agent_count() != s.model.agent_count() ||
      store.atom_count() != s.model.atom_count()) {
    throw std::invalid_argument("decorate_state: vocabulary mismatch");
  }
  const std::vector<WorldId> reach = reachable_worlds(s);
  std::vector<PossId> image(s.model.world_count(), 0);
  for (WorldId w : reach) {
    image[w] = store.add_node(s.model.valuation(w), OriginKey{0, w, kNoEvent});
  }
  for (WorldId w : reach) {
    for (std::size_t i = 0; i < s.model.agent_count(); ++i) {
      std::vector<PossId> succs;
      for (WorldId v : s.model.successors(static_cast<AgentId>(i), w)) {
        succs.push_back(image[v]);
      }
      store.set_info(image[w], static_cast<AgentId>(i), std::move(succs));
    }
  }
  PossibilitySpectrum out;
  out.store = &store;
  for (WorldId w : s.designated) out.designated.push_back(image[w]);
  std::sort(out.designated.begin(), out.designated.end());
  out.designated.erase(std::unique(out.designated.begin(), out.designated.end()),
                       out.designated.end());
  return out;
}

EpistemicStateK picture_state(const PossibilitySpectrum& u) {
  const std::vector<PossId> reach = reachable_nodes(u);
  std::vector<std::int64_t> local(u.store->size(), -1);
  for (std::size_t k = 0; k < reach.size(); ++k) local[reach[k]] = static_cast<std::int64_t>(k);

  EpistemicStateK out;
  out.model = KripkeModel(reach.size(), u.store->agent_count(), u.store->atom_count());
  for (std::size_t k = 0; k < reach.size(); ++k) {
    const auto& node = u.store->node(reach[k]);
    out.model.set_valuation(static_cast<WorldId>(k), node.valuation);
    for (std::size_t i = 0; i < node.info.size(); ++i) {
      for (PossId v : node.info[i]) {
        out.model.add_edge(static_cast<AgentId>(i), static_cast<WorldId>(k),
                           static_cast<WorldId>(local[v]));
      }
    }
  }
  out.model.sort_relations();
  for (PossId v : u.designated) out.designated.push_back(static_cast<WorldId>(local[v]));
  std::sort(out.designated.begin(), out.designated.end());
  return out;
}

EventualitySpectrum decorate_action(EventualityStore& store, const GroundAction& a) {
  if (store.agent_count() != a.agent_count()) {
    throw std::invalid_argument("decorate_action: agent count mismatch");
  }
  // Restrict to events reachable from the designated set.
  std::vector<bool> seen(a.events.size(), false);
  std::vector<EventId> stack(a.designated.begin(), a.designated.end());
  for (EventId e : stack) seen[e] = true;
  while (!stack.empty()) {
    const EventId e = stack.back();
    stack.pop_back();
    for (const auto& per_agent : a.rel) {
      for (EventId f : per_agent[e]) {
        if (!seen[f]) {
          seen[f] = true;
          stack.push_back(f);
        }
      }
    }
  }

  std::vector<std::int64_t> image(a.events.size(), -1);
  for (EventId e = 0; e < a.events.size(); ++e) {
    if (seen[e]) image[e] = store.add_node(a.events[e].pre, a.events[e].post);
  }
  for (EventId e = 0; e < a.events.size(); ++e) {
    if (!seen[e]) continue;
    for (std::size_t i = 0; i < a.agent_count(); ++i) {
      std::vector<EvtId> succs;
      for (EventId f : a.rel[i][e]) succs.push_back(static_cast<EvtId>(image[f]));
      store.set_info(static_cast<EvtId>(image[e]), static_cast<AgentId>(i),
                     std::move(succs));
    }
  }
  store.refresh_flags();

  EventualitySpectrum out;
  out.store = &store;
  for (EventId e : a.designated) out.designated.push_back(static_cast<EvtId>(image[e]));
  std::sort(out.designated.begin(), out.designated.end());
  out.designated.erase(std::unique(out.designated.begin(), out.designated.end()),
                       out.designated.end());
  return out;
}

GroundAction picture_action(const EventualitySpectrum& e, std::size_t atom_count) {
  (void)atom_count;
  std::vector<bool> seen(e.store->size(), false);
  std::vector<EvtId> stack(e.designated.begin(), e.designated.end());
  for (EvtId v : stack) seen[v] = true;
  while (!stack.empty()) {
    const EvtId v = stack.back();
    stack.pop_back();
    for (const auto& succs : e.store->node(v).info) {
      for (EvtId w : succs) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  std::vector<EvtId> reach;
  for (EvtId v = 0; v < seen.size(); ++v) {
    if (seen[v]) reach.push_back(v);
  }
  std::vector<std::int64_t> local(e.store->size(), -1);
  for (std::size_t k = 0; k < reach.size(); ++k) local[reach[k]] = static_cast<std::int64_t>(k);

  GroundAction out;
  out.name = "picture";
  out.rel.assign(e.store->agent_count(), {});
  for (auto& per_agent : out.rel) per_agent.resize(reach.size());
  for (std::size_t k = 0; k < reach.size(); ++k) {
    const auto& node = e.store->node(reach[k]);
    out.events.push_back({node.pre, node.post, false});
    for (std::size_t i = 0; i < node.info.size(); ++i) {
      for (EvtId w : node.info[i]) {
        out.rel[i][k].push_back(static_cast<EventId>(local[w]));
      }
      std::sort(out.rel[i][k].begin(), out.rel[i][k].end());
    }
  }
  for (EvtId v : e.designated) {
    out.events[local[v]].designated = true;
    out.designated.push_back(static_cast<EventId>(local[v]));
  }
  std::sort(out.designated.begin(), out.designated.end());
  return out;
}

bool applicable_p(const PossibilitySpectrum& u, const EventualitySpectrum& e) {
  for (PossId v : u.designated) {
    bool covered = false;
    for (EvtId f : e.designated) {
      if (eval_p(*u.store, v, e.store->node(f).pre)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

namespace {

struct UnionBuilder {
  PossibilityStore& store;
  const EventualityStore& estore;
  std::uint32_t step;
  std::deque<std::tuple<PossId, EvtId, PossId>> pending;  // (parent, eventuality, node)

  // u (+) e: reuse for hereditarily idle e, else memoized allocation. The
  // valuation is computable from the parent alone, so nodes are allocated
  // first and their info edges patched afterwards; the memo entry is in
  // place before any child is resolved, which ties the knot for cyclic
  // structures.
  PossId resolve(PossId u, EvtId e) {
    if (estore.node(e).reusable) return u;
    if (const auto hit = store.find_update(step, u, e)) return *hit;
    Bitset val = store.node(u).valuation;
    for (const auto& [p, f] : estore.node(e).post) {
      val.set(p, eval_p(store, u, f));
    }
    const PossId id = store.add_node(std::move(val), OriginKey{step, u, e});
    store.remember_update(step, u, e, id);
    pending.emplace_back(u, e, id);
    return id;
  }

  void run() {
    while (!pending.empty()) {
      const auto [u, e, id] = pending.front();
      pending.pop_front();
      for (std::size_t i = 0; i < store.agent_count(); ++i) {
        // Copy the parent's list: resolve() may grow the store.
        const std::vector<PossId> vs = store.node(u).info[i];
        const std::vector<EvtId>& fs = estore.node(e).info[i];
        std::vector<PossId> succs;
        for (PossId v : vs) {
          for (EvtId f : fs) {
            if (eval_p(store, v, estore.node(f).pre)) {
              succs.push_back(resolve(v, f));
            }
          }
        }
        store.set_info(id, static_cast<AgentId>(i), std::move(succs));
      }
    }
  }
};

}  // namespace

PossibilitySpectrum union_update(PossibilityStore& s, const PossibilitySpectrum& u,
                                 const EventualitySpectrum& e, std::uint32_t step) {
  if (!applicable_p(u, e)) {
    throw std::runtime_error("union_update: eventuality spectrum not applicable");
  }
  UnionBuilder builder{s, *e.store, step, {}};
  PossibilitySpectrum out;
  out.store = &s;
  for (PossId v : u.designated) {
    for (EvtId f : e.designated) {
      if (eval_p(s, v, e.store->node(f).pre)) {
        out.designated.push_back(builder.resolve(v, f));
      }
    }
  }
  builder.run();
  std::sort(out.designated.begin(), out.designated.end());
  out.designated.erase(std::unique(out.designated.begin(), out.designated.end()),
                       out.designated.end());
  return out;
}

std::string canonical_key(const PossibilitySpectrum& u) {
  const std::vector<PossId> reach = reachable_nodes(u);
  std::vector<std::int64_t> local(u.store->size(), -1);
  std::vector<const Bitset*> vals;
  for (PossId v : reach) {
    local[v] = static_cast<std::int64_t>(vals.size());
    vals.push_back(&u.store->node(v).valuation);
  }

  // Initial classes: rank of the valuation among the distinct ones present.
  std::vector<const Bitset*> distinct = vals;
  std::sort(distinct.begin(), distinct.end(),
            [](const Bitset* a, const Bitset* b) { return *a < *b; });
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](const Bitset* a, const Bitset* b) { return *a == *b; }),
                 distinct.end());
  std::vector<std::uint32_t> initial(reach.size());
  for (std::size_t k = 0; k < reach.size(); ++k) {
    const auto it =
        std::lower_bound(distinct.begin(), distinct.end(), vals[k],
                         [](const Bitset* a, const Bitset* b) { return *a < *b; });
    initial[k] = static_cast<std::uint32_t>(it - distinct.begin());
  }

  const std::size_t agents = u.store->agent_count();
  std::vector<std::vector<std::vector<std::uint32_t>>> adj(
      agents, std::vector<std::vector<std::uint32_t>>(reach.size()));
  for (std::size_t k = 0; k < reach.size(); ++k) {
    const auto& node = u.store->node(reach[k]);
    for (std::size_t i = 0; i < agents; ++i) {
      for (PossId v : node.info[i]) {
        adj[i][k].push_back(static_cast<std::uint32_t>(local[v]));
      }
    }
  }
  const auto succ = [&](std::size_t agent, std::uint32_t v) -> std::span<const std::uint32_t> {
    return adj[agent][v];
  };
  const auto classes = refine_partition(reach.size(), agents, succ, std::move(initial));
  const std::uint32_t blocks =
      classes.empty() ? 0 : 1 + *std::max_element(classes.begin(), classes.end());

  std::vector<std::uint32_t> rep(blocks, 0);
  std::vector<bool> have(blocks, false);
  for (std::size_t k = 0; k < reach.size(); ++k) {
    if (!have[classes[k]]) {
      have[classes[k]] = true;
      rep[classes[k]] = static_cast<std::uint32_t>(k);
    }
  }

  std::string key;
  key += "n" + std::to_string(blocks) + ";";
  for (std::uint32_t b = 0; b < blocks; ++b) {
    key += "v" + vals[rep[b]]->to_string();
    for (std::size_t i = 0; i < agents; ++i) {
      key += "|";
      std::vector<std::uint32_t> cs;
      for (std::uint32_t w : adj[i][rep[b]]) cs.push_back(classes[w]);
      std::sort(cs.begin(), cs.end());
      cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      for (std::uint32_t c : cs) key += std::to_string(c) + ",";
    }
    key += ";";
  }
  key += "d";
  std::vector<std::uint32_t> des;
  for (PossId v : u.designated) des.push_back(classes[local[v]]);
  std::sort(des.begin(), des.end());
  des.erase(std::unique(des.begin(), des.end()), des.end());
  for (std::uint32_t c : des) key += std::to_string(c) + ",";
  return key;
}

std::pair<std::size_t, std::size_t> count_nodes(const PossibilitySpectrum& u) {
  const std::vector<PossId> reach = reachable_nodes(u);
  std::size_t edges = 0;
  for (PossId v : reach) {
    for (const auto& succs : u.store->node(v).info) edges += succs.size();
  }
  return {reach.size(), edges};
}

PossibilitySpectrum contract_tail(PossibilityStore& s, std::size_t tail_start,
                                  const PossibilitySpectrum& u) {
  // Partition the reachable part; tail nodes bisimilar to a sealed node (or
  // to a smaller tail node) are dropped and references remapped. Only the
  // tail may be rewritten: ids below tail_start are referenced elsewhere.
  const std::vector<PossId> reach = reachable_nodes(u);
  std::vector<std::int64_t> local(s.size(), -1);
  std::vector<const Bitset*> vals;
  for (PossId v : reach) {
    local[v] = static_cast<std::int64_t>(vals.size());
    vals.push_back(&s.node(v).valuation);
  }
  std::vector<const Bitset*> distinct = vals;
  std::sort(distinct.begin(), distinct.end(),
            [](const Bitset* a, const Bitset* b) { return *a < *b; });
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](const Bitset* a, const Bitset* b) { return *a == *b; }),
                 distinct.end());
  std::vector<std::uint32_t> initial(reach.size());
  for (std::size_t k = 0; k < reach.size(); ++k) {
    const auto it =
        std::lower_bound(distinct.begin(), distinct.end(), vals[k],
                         [](const Bitset* a, const Bitset* b) { return *a < *b; });
    initial[k] = static_cast<std::uint32_t>(it - distinct.begin());
  }
  const std::size_t agents = s.agent_count();
  std::vector<std::vector<std::vector<std::uint32_t>>> adj(
      agents, std::vector<std::vector<std::uint32_t>>(reach.size()));
  for (std::size_t k = 0; k < reach.size(); ++k) {
    for (std::size_t i = 0; i < agents; ++i) {
      for (PossId v : s.node(reach[k]).info[i]) {
        adj[i][k].push_back(static_cast<std::uint32_t>(local[v]));
      }
    }
  }
  const auto succ = [&](std::size_t agent, std::uint32_t v) -> std::span<const std::uint32_t> {
    return adj[agent][v];
  };
  const auto classes = refine_partition(reach.size(), agents, succ, std::move(initial));

  // Representative per class: smallest node id, so sealed nodes win.
  std::map<std::uint32_t, PossId> rep;
  for (std::size_t k = 0; k < reach.size(); ++k) {
    const auto it = rep.find(classes[k]);
    if (it == rep.end() || reach[k] < it->second) rep[classes[k]] = reach[k];
  }
  std::vector<PossId> target(s.size());
  for (PossId v = 0; v < s.size(); ++v) target[v] = v;
  bool any = false;
  for (std::size_t k = 0; k < reach.size(); ++k) {
    const PossId r = rep[classes[k]];
    if (reach[k] >= tail_start && r != reach[k]) {
      target[reach[k]] = r;
      any = true;
    }
  }
  PossibilitySpectrum out;
  out.store = &s;
  for (PossId v : u.designated) out.designated.push_back(target[v]);
  std::sort(out.designated.begin(), out.designated.end());
  out.designated.erase(std::unique(out.designated.begin(), out.designated.end()),
                       out.designated.end());
  if (any) s.remap_tail(tail_start, target);
  return out;
}

}  // namespace epiplan
