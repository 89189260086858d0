#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace epiplan {

using AtomId = std::uint32_t;
using AgentId = std::uint32_t;

// Dense name <-> id tables for the task's atoms and agents. Identifiers
// match [a-z][a-z0-9_]*; the grammar keywords and the internal
// precondition pseudo-atom "pre" are rejected.
class Vocabulary {
 public:
  AtomId add_atom(std::string name);
  AgentId add_agent(std::string name);

  std::optional<AtomId> atom(std::string_view name) const;
  std::optional<AgentId> agent(std::string_view name) const;

  const std::string& atom_name(AtomId a) const { return atoms_.at(a); }
  const std::string& agent_name(AgentId i) const { return agents_.at(i); }

  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t agent_count() const { return agents_.size(); }

  static bool valid_identifier(std::string_view name);
  static bool reserved(std::string_view name);

 private:
  std::vector<std::string> atoms_;
  std::vector<std::string> agents_;
};

enum class FormulaKind : std::uint8_t { top, atom, neg, conj, box, dia };

namespace detail {
struct FormulaNode;
}

// Immutable epistemic formula tree; cheap to copy and safe to share across
// threads. A default-constructed Formula is an empty handle.
class Formula {
 public:
  using Kind = FormulaKind;

  Formula() = default;

  static Formula top();
  static Formula atom(AtomId a);
  static Formula neg(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula box(AgentId i, Formula f);
  static Formula dia(AgentId i, Formula f);

  // Parse-time sugar; never stored in the tree.
  static Formula disj(Formula lhs, Formula rhs);     // neg(and(neg l, neg r))
  static Formula implies(Formula lhs, Formula rhs);  // disj(neg l, r)

  // Conjunction of a list; top for an empty list.
  static Formula all_of(const std::vector<Formula>& fs);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  bool is_top() const { return kind() == Kind::top; }
  AtomId atom_id() const;
  AgentId agent() const;
  const Formula& lhs() const;  // child of neg/box/dia, left of conj
  const Formula& rhs() const;  // right of conj

  bool operator==(const Formula& other) const;  // structural
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const detail::FormulaNode> node_;
};

namespace detail {
struct FormulaNode {
  FormulaKind kind;
  AtomId atom = 0;
  AgentId agent = 0;
  Formula lhs;
  Formula rhs;
};
}  // namespace detail

struct FormulaParseError : std::runtime_error {
  FormulaParseError(std::size_t offset_, const std::string& message)
      : std::runtime_error(message), offset(offset_) {}
  std::size_t offset;  // 1-based byte offset into the input
};

// Grammar: top | <atom> | neg(F) | and(F,F) | or(F,F) | imp(F,F)
//        | box(<agent>,F) | dia(<agent>,F); whitespace-insensitive.
Formula parse_formula(std::string_view text, const Vocabulary& vocab);

// Canonical functional rendering; parse_formula(render_formula(f)) == f.
std::string render_formula(const Formula& f, const Vocabulary& vocab);

// Normal form: box rewritten to neg(dia(.,neg(.))), double negation
// simplified. Truth-equivalent to the input on every state.
Formula normalize(const Formula& f);

int modal_depth(const Formula& f);

}  // namespace epiplan
