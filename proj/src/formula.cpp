#include "epiplan/formula.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace epiplan {

namespace {

const std::array<std::string_view, 8> kReserved = {
    "top", "neg", "and", "or", "imp", "box", "dia", "pre"};

}  // namespace

bool Vocabulary::valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (name[0] < 'a' || name[0] > 'z') return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

bool Vocabulary::reserved(std::string_view name) {
  return std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end();
}

AtomId Vocabulary::add_atom(std::string name) {
  if (!valid_identifier(name)) {
    throw std::invalid_argument("invalid atom name '" + name + "'");
  }
  if (reserved(name)) {
    throw std::invalid_argument("reserved word used as atom name: '" + name + "'");
  }
  if (atom(name)) {
    throw std::invalid_argument("duplicate atom '" + name + "'");
  }
  atoms_.push_back(std::move(name));
  return static_cast<AtomId>(atoms_.size() - 1);
}

AgentId Vocabulary::add_agent(std::string name) {
  if (!valid_identifier(name)) {
    throw std::invalid_argument("invalid agent name '" + name + "'");
  }
  if (reserved(name)) {
    throw std::invalid_argument("reserved word used as agent name: '" + name + "'");
  }
  if (agent(name)) {
    throw std::invalid_argument("duplicate agent '" + name + "'");
  }
  agents_.push_back(std::move(name));
  return static_cast<AgentId>(agents_.size() - 1);
}

std::optional<AtomId> Vocabulary::atom(std::string_view name) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i] == name) return static_cast<AtomId>(i);
  }
  return std::nullopt;
}

std::optional<AgentId> Vocabulary::agent(std::string_view name) const {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i] == name) return static_cast<AgentId>(i);
  }
  return std::nullopt;
}

Formula Formula::top() {
  static const Formula instance(
      std::make_shared<detail::FormulaNode>(detail::FormulaNode{FormulaKind::top}));
  return instance;
}

Formula Formula::atom(AtomId a) {
  auto node = std::make_shared<detail::FormulaNode>();
  node->kind = FormulaKind::atom;
  node->atom = a;
  return Formula(std::move(node));
}

Formula Formula::neg(Formula f) {
  auto node = std::make_shared<detail::FormulaNode>();
  node->kind = FormulaKind::neg;
  node->lhs = std::move(f);
  return Formula(std::move(node));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  auto node = std::make_shared<detail::FormulaNode>();
  node->kind = FormulaKind::conj;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return Formula(std::move(node));
}

Formula Formula::box(AgentId i, Formula f) {
  auto node = std::make_shared<detail::FormulaNode>();
  node->kind = FormulaKind::box;
  node->agent = i;
  node->lhs = std::move(f);
  return Formula(std::move(node));
}

Formula Formula::dia(AgentId i, Formula f) {
  auto node = std::make_shared<detail::FormulaNode>();
  node->kind = FormulaKind::dia;
  node->agent = i;
  node->lhs = std::move(f);
  return Formula(std::move(node));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  return neg(conj(neg(std::move(lhs)), neg(std::move(rhs))));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return disj(neg(std::move(lhs)), std::move(rhs));
}

Formula Formula::all_of(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

FormulaKind Formula::kind() const { return node_->kind; }
AtomId Formula::atom_id() const { return node_->atom; }
AgentId Formula::agent() const { return node_->agent; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case FormulaKind::top:
      return true;
    case FormulaKind::atom:
      return node_->atom == other.node_->atom;
    case FormulaKind::neg:
      return node_->lhs == other.node_->lhs;
    case FormulaKind::conj:
      return node_->lhs == other.node_->lhs && node_->rhs == other.node_->rhs;
    case FormulaKind::box:
    case FormulaKind::dia:
      return node_->agent == other.node_->agent && node_->lhs == other.node_->lhs;
  }
  return false;
}

namespace {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Vocabulary& vocab)
      : text_(text), vocab_(vocab) {}

  Formula parse() {
    Formula f = expression();
    skip_ws();
    if (pos_ != text_.size()) {
      fail(pos_, "trailing input after formula");
    }
    return f;
  }

 private:
  [[noreturn]] void fail(std::size_t pos, const std::string& message) {
    throw FormulaParseError(pos + 1, message + " at offset " + std::to_string(pos + 1));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  std::string_view identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const bool ok =
          (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
      if (!ok) break;
      ++pos_;
    }
    if (pos_ == start) {
      fail(start, "expected identifier");
    }
    return text_.substr(start, pos_ - start);
  }

  AgentId agent_argument() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string_view name = identifier();
    const auto id = vocab_.agent(name);
    if (!id) {
      fail(start, "unknown agent '" + std::string(name) + "'");
    }
    return *id;
  }

  Formula expression() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string_view name = identifier();
    if (name == "top") return Formula::top();
    if (name == "neg") {
      expect('(');
      Formula f = expression();
      expect(')');
      return Formula::neg(std::move(f));
    }
    if (name == "and" || name == "or" || name == "imp") {
      expect('(');
      Formula l = expression();
      expect(',');
      Formula r = expression();
      expect(')');
      if (name == "and") return Formula::conj(std::move(l), std::move(r));
      if (name == "or") return Formula::disj(std::move(l), std::move(r));
      return Formula::implies(std::move(l), std::move(r));
    }
    if (name == "box" || name == "dia") {
      expect('(');
      AgentId i = agent_argument();
      expect(',');
      Formula f = expression();
      expect(')');
      return name == "box" ? Formula::box(i, std::move(f))
                           : Formula::dia(i, std::move(f));
    }
    const auto id = vocab_.atom(name);
    if (!id) {
      fail(start, "unknown atom '" + std::string(name) + "'");
    }
    return Formula::atom(*id);
  }

  std::string_view text_;
  const Vocabulary& vocab_;
  std::size_t pos_ = 0;
};

void render_into(const Formula& f, const Vocabulary& vocab, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::top:
      out += "top";
      return;
    case FormulaKind::atom:
      out += vocab.atom_name(f.atom_id());
      return;
    case FormulaKind::neg:
      out += "neg(";
      render_into(f.lhs(), vocab, out);
      out += ')';
      return;
    case FormulaKind::conj:
      out += "and(";
      render_into(f.lhs(), vocab, out);
      out += ',';
      render_into(f.rhs(), vocab, out);
      out += ')';
      return;
    case FormulaKind::box:
    case FormulaKind::dia:
      out += f.kind() == FormulaKind::box ? "box(" : "dia(";
      out += vocab.agent_name(f.agent());
      out += ',';
      render_into(f.lhs(), vocab, out);
      out += ')';
      return;
  }
}

// Negation with double-negation collapse; operand must be normal.
Formula negate_normal(Formula f) {
  if (f.kind() == FormulaKind::neg) return f.lhs();
  return Formula::neg(std::move(f));
}

}  // namespace

Formula parse_formula(std::string_view text, const Vocabulary& vocab) {
  return FormulaParser(text, vocab).parse();
}

std::string render_formula(const Formula& f, const Vocabulary& vocab) {
  std::string out;
  render_into(f, vocab, out);
  return out;
}

Formula normalize(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::top:
    case FormulaKind::atom:
      return f;
    case FormulaKind::neg:
      return negate_normal(normalize(f.lhs()));
    case FormulaKind::conj: {
      Formula l = normalize(f.lhs());
      Formula r = normalize(f.rhs());
      if (l == f.lhs() && r == f.rhs()) return f;
      return Formula::conj(std::move(l), std::move(r));
    }
    case FormulaKind::dia: {
      Formula inner = normalize(f.lhs());
      if (inner == f.lhs()) return f;
      return Formula::dia(f.agent(), std::move(inner));
    }
    case FormulaKind::box: {
      // box(i,f) -> neg(dia(i,neg(f)))
      Formula inner = negate_normal(normalize(f.lhs()));
      return Formula::neg(Formula::dia(f.agent(), std::move(inner)));
    }
  }
  return f;
}

int modal_depth(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::top:
    case FormulaKind::atom:
      return 0;
    case FormulaKind::neg:
      return modal_depth(f.lhs());
    case FormulaKind::conj:
      return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
    case FormulaKind::box:
    case FormulaKind::dia:
      return 1 + modal_depth(f.lhs());
  }
  return 0;
}

}  // namespace epiplan
