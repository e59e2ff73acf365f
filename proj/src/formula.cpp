#include "zeroone/formula.hpp"

#include <algorithm>
#include <stdexcept>

namespace zeroone {

const char* atom_kind_name(AtomKind kind) {
  switch (kind) {
    case AtomKind::Eq:
      return "=";
    case AtomKind::Less:
      return "<";
    case AtomKind::Adj:
      return "~";
    case AtomKind::FuncEq:
      return "F(.,.)=.";
  }
  return "?";
}

namespace {

FormulaPtr node(NodeKind kind) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  return f;
}

}  // namespace

FormulaPtr Formula::make_atom(AtomKind kind, std::vector<std::string> vars) {
  const std::size_t arity = kind == AtomKind::FuncEq ? 3 : 2;
  if (vars.size() != arity) throw std::invalid_argument("atom arity mismatch");
  for (const auto& v : vars) {
    if (v.empty()) throw std::invalid_argument("empty variable name");
  }
  auto f = std::make_shared<Formula>();
  f->kind = NodeKind::Atom;
  f->atom = kind;
  f->atom_vars = std::move(vars);
  return f;
}

FormulaPtr Formula::make_not(FormulaPtr child) {
  auto f = node(NodeKind::Not);
  std::const_pointer_cast<Formula>(f)->children = {std::move(child)};
  return f;
}

FormulaPtr Formula::make_and(std::vector<FormulaPtr> children) {
  if (children.size() < 2) throw std::invalid_argument("And requires >= 2 children");
  auto f = node(NodeKind::And);
  std::const_pointer_cast<Formula>(f)->children = std::move(children);
  return f;
}

FormulaPtr Formula::make_or(std::vector<FormulaPtr> children) {
  if (children.size() < 2) throw std::invalid_argument("Or requires >= 2 children");
  auto f = node(NodeKind::Or);
  std::const_pointer_cast<Formula>(f)->children = std::move(children);
  return f;
}

FormulaPtr Formula::make_implies(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = node(NodeKind::Implies);
  std::const_pointer_cast<Formula>(f)->children = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr Formula::make_iff(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = node(NodeKind::Iff);
  std::const_pointer_cast<Formula>(f)->children = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr Formula::make_exists(std::string var, FormulaPtr body) {
  if (var.empty()) throw std::invalid_argument("empty variable name");
  auto f = node(NodeKind::Exists);
  auto* m = std::const_pointer_cast<Formula>(f).get();
  m->bound_var = std::move(var);
  m->children = {std::move(body)};
  return f;
}

FormulaPtr Formula::make_forall(std::string var, FormulaPtr body) {
  if (var.empty()) throw std::invalid_argument("empty variable name");
  auto f = node(NodeKind::Forall);
  auto* m = std::const_pointer_cast<Formula>(f).get();
  m->bound_var = std::move(var);
  m->children = {std::move(body)};
  return f;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind == NodeKind::Atom) {
    return a->atom == b->atom && a->atom_vars == b->atom_vars;
  }
  if (a->bound_var != b->bound_var) return false;
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i) {
    if (!structurally_equal(a->children[i], b->children[i])) return false;
  }
  return true;
}

FormulaPtr desugar(const FormulaPtr& f) {
  switch (f->kind) {
    case NodeKind::Atom:
      return f;
    case NodeKind::Not: {
      auto child = desugar(f->children[0]);
      if (child == f->children[0]) return f;
      return Formula::make_not(std::move(child));
    }
    case NodeKind::And:
    case NodeKind::Or: {
      std::vector<FormulaPtr> children;
      children.reserve(f->children.size());
      bool changed = false;
      for (const auto& c : f->children) {
        children.push_back(desugar(c));
        changed |= children.back() != c;
      }
      if (!changed) return f;
      return f->kind == NodeKind::And ? Formula::make_and(std::move(children))
                                      : Formula::make_or(std::move(children));
    }
    case NodeKind::Implies: {
      auto lhs = desugar(f->children[0]);
      auto rhs = desugar(f->children[1]);
      return Formula::make_or({Formula::make_not(lhs), rhs});
    }
    case NodeKind::Iff: {
      auto lhs = desugar(f->children[0]);
      auto rhs = desugar(f->children[1]);
      return Formula::make_and({Formula::make_or({Formula::make_not(lhs), rhs}),
                                Formula::make_or({Formula::make_not(rhs), lhs})});
    }
    case NodeKind::Exists: {
      auto body = desugar(f->children[0]);
      if (body == f->children[0]) return f;
      return Formula::make_exists(f->bound_var, std::move(body));
    }
    case NodeKind::Forall: {
      auto body = desugar(f->children[0]);
      if (body == f->children[0]) return f;
      return Formula::make_forall(f->bound_var, std::move(body));
    }
  }
  return f;
}

int quantifier_depth(const FormulaPtr& f) {
  switch (f->kind) {
    case NodeKind::Atom:
      return 0;
    case NodeKind::Exists:
    case NodeKind::Forall:
      return 1 + quantifier_depth(f->children[0]);
    default: {
      int depth = 0;
      for (const auto& c : f->children) depth = std::max(depth, quantifier_depth(c));
      return depth;
    }
  }
}

namespace {

void collect_free(const FormulaPtr& f, std::vector<std::string>& bound,
                  std::vector<std::string>& out) {
  if (f->kind == NodeKind::Atom) {
    for (const auto& v : f->atom_vars) {
      if (std::find(bound.begin(), bound.end(), v) == bound.end() &&
          std::find(out.begin(), out.end(), v) == out.end()) {
        out.push_back(v);
      }
    }
    return;
  }
  if (f->kind == NodeKind::Exists || f->kind == NodeKind::Forall) {
    bound.push_back(f->bound_var);
    collect_free(f->children[0], bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& c : f->children) collect_free(c, bound, out);
}

// Print levels mirror the grammar: formula(-1) < iff(0) < implies(1) < or(2)
// < and(3) < neg(4). A child printed below its required level gets
// parentheses, so structure survives the round trip; quantifiers are legal
// only at formula positions and get parentheses everywhere else.
constexpr int kLevelFormula = -1;
constexpr int kLevelIff = 0;
constexpr int kLevelImplies = 1;
constexpr int kLevelOr = 2;
constexpr int kLevelAnd = 3;
constexpr int kLevelNeg = 4;

void print(const FormulaPtr& f, int min_level, std::string& out) {
  const bool is_quantifier = f->kind == NodeKind::Exists || f->kind == NodeKind::Forall;
  int level = kLevelNeg;
  switch (f->kind) {
    case NodeKind::Iff:
      level = kLevelIff;
      break;
    case NodeKind::Implies:
      level = kLevelImplies;
      break;
    case NodeKind::Or:
      level = kLevelOr;
      break;
    case NodeKind::And:
      level = kLevelAnd;
      break;
    default:
      break;
  }
  const bool parens = is_quantifier ? min_level > kLevelFormula : level < min_level;
  if (parens) out += "(";
  switch (f->kind) {
    case NodeKind::Atom:
      if (f->atom == AtomKind::FuncEq) {
        out += "F(" + f->atom_vars[0] + ", " + f->atom_vars[1] + ") = " + f->atom_vars[2];
      } else {
        const char* op = f->atom == AtomKind::Eq ? " = " : f->atom == AtomKind::Less ? " < " : " ~ ";
        out += f->atom_vars[0] + op + f->atom_vars[1];
      }
      break;
    case NodeKind::Not:
      out += "!";
      print(f->children[0], kLevelNeg, out);
      break;
    case NodeKind::And:
    case NodeKind::Or: {
      const char* op = f->kind == NodeKind::And ? " & " : " | ";
      const int child_level = f->kind == NodeKind::And ? kLevelNeg : kLevelAnd;
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        if (i > 0) out += op;
        print(f->children[i], child_level, out);
      }
      break;
    }
    case NodeKind::Implies:
      print(f->children[0], kLevelOr, out);
      out += " -> ";
      print(f->children[1], kLevelImplies, out);
      break;
    case NodeKind::Iff:
      print(f->children[0], kLevelImplies, out);
      out += " <-> ";
      print(f->children[1], kLevelIff, out);
      break;
    case NodeKind::Exists:
    case NodeKind::Forall:
      out += f->kind == NodeKind::Exists ? "exists " : "forall ";
      out += f->bound_var + ". ";
      print(f->children[0], kLevelFormula, out);
      break;
  }
  if (parens) out += ")";
}

void check_vocabulary(const FormulaPtr& f, const Vocabulary& vocab) {
  if (f->kind == NodeKind::Atom) {
    if (!vocab.admits(f->atom)) {
      throw VocabularyError(std::string("atom '") + atom_kind_name(f->atom) +
                            "' not admitted by the vocabulary");
    }
    return;
  }
  for (const auto& c : f->children) check_vocabulary(c, vocab);
}

}  // namespace

std::vector<std::string> free_variables(const FormulaPtr& f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  collect_free(f, bound, out);
  return out;
}

std::string pretty_print(const FormulaPtr& f) {
  std::string out;
  print(f, kLevelFormula, out);
  return out;
}

Sentence Sentence::make(FormulaPtr formula, Vocabulary vocabulary) {
  check_vocabulary(formula, vocabulary);
  auto free = free_variables(formula);
  if (!free.empty()) throw FreeVariableError(free.front());
  Sentence s;
  s.depth = quantifier_depth(formula);
  s.formula = std::move(formula);
  s.vocabulary = vocabulary;
  return s;
}

int quantifier_depth(const Sentence& s) { return s.depth; }

}  // namespace zeroone
