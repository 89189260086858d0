#include "doctest.h"

#include <random>

#include "epiplan/formula.hpp"
#include "epiplan/kripke.hpp"

using namespace epiplan;

namespace {

Vocabulary coin_vocab() {
  Vocabulary v;
  v.add_atom("h");
  v.add_agent("a");
  v.add_agent("b");
  return v;
}

// Small random formula generator shared by the property checks below.
Formula random_formula(std::mt19937_64& rng, std::size_t atoms, std::size_t agents,
                       int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 5);
  switch (pick(rng)) {
    case 0:
      return Formula::top();
    case 1:
      return Formula::atom(static_cast<AtomId>(rng() % atoms));
    case 2:
      return Formula::neg(random_formula(rng, atoms, agents, depth - 1));
    case 3:
      return Formula::conj(random_formula(rng, atoms, agents, depth - 1),
                           random_formula(rng, atoms, agents, depth - 1));
    case 4:
      return Formula::box(static_cast<AgentId>(rng() % agents),
                          random_formula(rng, atoms, agents, depth - 1));
    default:
      return Formula::dia(static_cast<AgentId>(rng() % agents),
                          random_formula(rng, atoms, agents, depth - 1));
  }
}

EpistemicStateK random_small_state(std::mt19937_64& rng, std::size_t atoms,
                                   std::size_t agents) {
  const std::size_t worlds = 1 + rng() % 5;
  EpistemicStateK s;
  s.model = KripkeModel(worlds, agents, atoms);
  for (WorldId w = 0; w < worlds; ++w) {
    for (AtomId p = 0; p < atoms; ++p) {
      if (rng() % 2) s.model.set_atom(w, p);
    }
    for (AgentId i = 0; i < agents; ++i) {
      for (WorldId v = 0; v < worlds; ++v) {
        if (rng() % 10 < 4) s.model.add_edge(i, w, v);
      }
    }
  }
  s.model.sort_relations();
  s.designated.push_back(static_cast<WorldId>(rng() % worlds));
  return s;
}

}  // namespace

TEST_CASE("parse basic forms") {
  const Vocabulary v = coin_vocab();
  const Formula f = parse_formula("and(h, dia(a, neg(h)))", v);
  const AtomId h = *v.atom("h");
  const AgentId a = *v.agent("a");
  CHECK(f == Formula::conj(Formula::atom(h),
                           Formula::dia(a, Formula::neg(Formula::atom(h)))));

  CHECK(parse_formula("box(b, top)", v) ==
        Formula::box(*v.agent("b"), Formula::top()));
  CHECK(parse_formula("  top ", v) == Formula::top());
}

TEST_CASE("or and imp are desugared at parse time") {
  const Vocabulary v = coin_vocab();
  const Formula f = parse_formula("or(h, neg(h))", v);
  const Formula h = Formula::atom(*v.atom("h"));
  CHECK(f == Formula::neg(Formula::conj(Formula::neg(h), Formula::neg(Formula::neg(h)))));
  CHECK(parse_formula("imp(h,h)", v) == parse_formula("or(neg(h),h)", v));
}

TEST_CASE("parse errors carry 1-based offsets") {
  const Vocabulary v = coin_vocab();
  try {
    parse_formula("and(h,", v);
    FAIL("expected parse error");
  } catch (const FormulaParseError& err) {
    CHECK(err.offset == 7);
  }
  CHECK_THROWS_AS(parse_formula("and(h, dia(c, h))", v), FormulaParseError);
  CHECK_THROWS_AS(parse_formula("unknown_atom", v), FormulaParseError);
  CHECK_THROWS_AS(parse_formula("and(h,h) trailing", v), FormulaParseError);
}

TEST_CASE("render examples") {
  const Vocabulary v = coin_vocab();
  const AtomId h = *v.atom("h");
  const AgentId a = *v.agent("a");
  CHECK(render_formula(Formula::conj(Formula::atom(h),
                                     Formula::dia(a, Formula::neg(Formula::atom(h)))),
                       v) == "and(h,dia(a,neg(h)))");
  CHECK(render_formula(Formula::top(), v) == "top");
  CHECK(render_formula(Formula::box(a, Formula::atom(h)), v) == "box(a,h)");
}

TEST_CASE("normalize examples") {
  const Vocabulary v = coin_vocab();
  const AtomId h = *v.atom("h");
  const AgentId a = *v.agent("a");
  const Formula hh = Formula::atom(h);

  CHECK(normalize(Formula::box(a, hh)) ==
        Formula::neg(Formula::dia(a, Formula::neg(hh))));
  CHECK(normalize(Formula::neg(Formula::neg(hh))) == hh);
  CHECK(normalize(Formula::dia(a, hh)) == Formula::dia(a, hh));
}

TEST_CASE("modal depth") {
  const Vocabulary v = coin_vocab();
  const AtomId h = *v.atom("h");
  const AgentId a = *v.agent("a");
  const AgentId b = *v.agent("b");
  const Formula hh = Formula::atom(h);
  CHECK(modal_depth(hh) == 0);
  CHECK(modal_depth(Formula::box(a, Formula::dia(b, hh))) == 2);
  CHECK(modal_depth(Formula::conj(Formula::dia(a, hh), hh)) == 1);
}

TEST_CASE("vocabulary rejects reserved and malformed names") {
  Vocabulary v;
  CHECK_THROWS_AS(v.add_atom("pre"), std::invalid_argument);
  CHECK_THROWS_AS(v.add_atom("Upper"), std::invalid_argument);
  CHECK_THROWS_AS(v.add_atom("1x"), std::invalid_argument);
  CHECK_THROWS_AS(v.add_agent("dia"), std::invalid_argument);
  v.add_atom("h");
  CHECK_THROWS_AS(v.add_atom("h"), std::invalid_argument);
}

TEST_CASE("property: parse round-trips render") {
  Vocabulary v;
  v.add_atom("h");
  v.add_atom("t");
  v.add_atom("q0");
  v.add_agent("a");
  v.add_agent("b");
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const Formula f = random_formula(rng, v.atom_count(), v.agent_count(), 4);
    CHECK(parse_formula(render_formula(f, v), v) == f);
  }
}

TEST_CASE("property: normalize is idempotent, box-free and depth-preserving") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const Formula f = random_formula(rng, 3, 2, 4);
    const Formula n = normalize(f);
    CHECK(normalize(n) == n);
    CHECK(modal_depth(n) == modal_depth(f));

    // no box node and no double negation anywhere
    std::vector<Formula> stack{n};
    while (!stack.empty()) {
      const Formula g = stack.back();
      stack.pop_back();
      CHECK(g.kind() != FormulaKind::box);
      if (g.kind() == FormulaKind::neg) {
        CHECK(g.lhs().kind() != FormulaKind::neg);
      }
      switch (g.kind()) {
        case FormulaKind::neg:
        case FormulaKind::dia:
          stack.push_back(g.lhs());
          break;
        case FormulaKind::conj:
          stack.push_back(g.lhs());
          stack.push_back(g.rhs());
          break;
        default:
          break;
      }
    }
  }
}

TEST_CASE("property: normalize preserves truth on sampled states") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const EpistemicStateK s = random_small_state(rng, 3, 2);
    const Formula f = random_formula(rng, 3, 2, 3);
    CHECK(eval_state_k(s, f) == eval_state_k(s, normalize(f)));
  }
}
