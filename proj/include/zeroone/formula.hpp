#pragma once

#include <memory>
#include <string>
#include <vector>

#include "zeroone/errors.hpp"

namespace zeroone {

enum class VocabularyKind { GraphOrder, BinaryFunction };

enum class AtomKind { Eq, Less, Adj, FuncEq };

/// Which atoms a sentence may use. GraphOrder admits x=y, x<y, x~y;
/// BinaryFunction admits x=y and the flat term F(x,y)=z.
struct Vocabulary {
  VocabularyKind kind;

  bool admits(AtomKind atom) const {
    switch (atom) {
      case AtomKind::Eq:
        return true;
      case AtomKind::Less:
      case AtomKind::Adj:
        return kind == VocabularyKind::GraphOrder;
      case AtomKind::FuncEq:
        return kind == VocabularyKind::BinaryFunction;
    }
    return false;
  }

  static Vocabulary graph_order() { return {VocabularyKind::GraphOrder}; }
  static Vocabulary binary_function() { return {VocabularyKind::BinaryFunction}; }
};

const char* atom_kind_name(AtomKind kind);

enum class NodeKind { Atom, Not, And, Or, Implies, Iff, Exists, Forall };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable first-order formula node. And/Or are n-ary with >= 2 children;
/// quantifiers bind one variable, innermost binder wins on shadowing.
class Formula {
 public:
  NodeKind kind;
  AtomKind atom = AtomKind::Eq;          // Atom only
  std::vector<std::string> atom_vars;    // Atom only: 2 args, or 3 for F(x,y)=z
  std::string bound_var;                 // Exists/Forall only
  std::vector<FormulaPtr> children;

  static FormulaPtr make_atom(AtomKind kind, std::vector<std::string> vars);
  static FormulaPtr make_not(FormulaPtr child);
  static FormulaPtr make_and(std::vector<FormulaPtr> children);
  static FormulaPtr make_or(std::vector<FormulaPtr> children);
  static FormulaPtr make_implies(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr make_iff(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr make_exists(std::string var, FormulaPtr body);
  static FormulaPtr make_forall(std::string var, FormulaPtr body);
};

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

/// Rewrites Implies/Iff away; result uses only Atom/Not/And/Or/Exists/Forall
/// and is semantically equivalent on every model. Idempotent.
FormulaPtr desugar(const FormulaPtr& f);

/// Maximum quantifier nesting; 0 for quantifier-free formulas.
int quantifier_depth(const FormulaPtr& f);

/// Variables with at least one free occurrence, in first-occurrence order.
std::vector<std::string> free_variables(const FormulaPtr& f);

/// Concrete syntax accepted back by the parser; parse(pretty_print(f)) == f.
std::string pretty_print(const FormulaPtr& f);

/// A closed formula over a vocabulary; depth is the quantifier rank d_A used
/// for circuit-depth accounting.
struct Sentence {
  FormulaPtr formula;
  Vocabulary vocabulary;
  int depth;

  /// Validates closedness and vocabulary; throws FreeVariableError/VocabularyError.
  static Sentence make(FormulaPtr formula, Vocabulary vocabulary);
};

int quantifier_depth(const Sentence& s);

}  // namespace zeroone
