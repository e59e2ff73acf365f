#include "zeroone/semantics.hpp"

#include <string>
#include <utility>
#include <vector>

namespace zeroone {

namespace {

// Innermost-binder resolution: scan bindings from the back.
class Environment {
 public:
  void push(const std::string& name, int value) { bindings_.emplace_back(&name, value); }
  void pop() { bindings_.pop_back(); }

  int lookup(const std::string& name) const {
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it) {
      if (*it->first == name) return it->second;
    }
    throw std::logic_error("unbound variable in a closed sentence: " + name);
  }

 private:
  std::vector<std::pair<const std::string*, int>> bindings_;
};

std::uint64_t pow_saturating(std::uint64_t base, int exp) {
  std::uint64_t result = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base) return UINT64_MAX;
    result *= base;
  }
  return result;
}

void check_cost(int m, const Sentence& s) {
  if (pow_saturating(static_cast<std::uint64_t>(m), s.depth) > kOracleCostCap) {
    throw TooLargeError("oracle cost m^depth exceeds the desk-scale cap");
  }
}

template <typename AtomEval>
class Evaluator {
 public:
  Evaluator(int universe_size, AtomEval atom_eval)
      : m_(universe_size), atom_eval_(std::move(atom_eval)) {}

  bool eval(const FormulaPtr& f) {
    switch (f->kind) {
      case NodeKind::Atom:
        return atom_eval_(*f, env_);
      case NodeKind::Not:
        return !eval(f->children[0]);
      case NodeKind::And:
        for (const auto& c : f->children) {
          if (!eval(c)) return false;
        }
        return true;
      case NodeKind::Or:
        for (const auto& c : f->children) {
          if (eval(c)) return true;
        }
        return false;
      case NodeKind::Implies:
        return !eval(f->children[0]) || eval(f->children[1]);
      case NodeKind::Iff:
        return eval(f->children[0]) == eval(f->children[1]);
      case NodeKind::Exists:
        for (int v = 1; v <= m_; ++v) {
          env_.push(f->bound_var, v);
          const bool hit = eval(f->children[0]);
          env_.pop();
          if (hit) return true;
        }
        return false;
      case NodeKind::Forall:
        for (int v = 1; v <= m_; ++v) {
          env_.push(f->bound_var, v);
          const bool hit = eval(f->children[0]);
          env_.pop();
          if (!hit) return false;
        }
        return true;
    }
    throw std::logic_error("unreachable formula kind");
  }

 private:
  int m_;
  AtomEval atom_eval_;
  Environment env_;
};

}  // namespace

bool eval_graph_sentence(const OrderedGraph& g, const Sentence& s) {
  if (s.vocabulary.kind != VocabularyKind::GraphOrder) {
    throw VocabularyError("eval_graph_sentence needs a GraphOrder sentence");
  }
  check_cost(g.size(), s);
  auto atom_eval = [&g](const Formula& atom, const Environment& env) {
    const int a = env.lookup(atom.atom_vars[0]);
    const int b = env.lookup(atom.atom_vars[1]);
    switch (atom.atom) {
      case AtomKind::Eq:
        return a == b;
      case AtomKind::Less:
        return a < b;
      case AtomKind::Adj:
        return g.adjacent(a, b);
      default:
        throw VocabularyError("function atom in a graph sentence");
    }
  };
  Evaluator<decltype(atom_eval)> ev(g.size(), std::move(atom_eval));
  return ev.eval(s.formula);
}

bool eval_function_sentence(const BinaryFunctionTable& f, const Sentence& s) {
  if (s.vocabulary.kind != VocabularyKind::BinaryFunction) {
    throw VocabularyError("eval_function_sentence needs a BinaryFunction sentence");
  }
  check_cost(f.m, s);
  auto atom_eval = [&f](const Formula& atom, const Environment& env) {
    switch (atom.atom) {
      case AtomKind::Eq:
        return env.lookup(atom.atom_vars[0]) == env.lookup(atom.atom_vars[1]);
      case AtomKind::FuncEq: {
        const int x = env.lookup(atom.atom_vars[0]);
        const int y = env.lookup(atom.atom_vars[1]);
        const int z = env.lookup(atom.atom_vars[2]);
        return f.value(x, y) == z;
      }
      default:
        throw VocabularyError("graph atom in a function sentence");
    }
  };
  Evaluator<decltype(atom_eval)> ev(f.m, std::move(atom_eval));
  return ev.eval(s.formula);
}

bool eval_function_sentence(const PartialBinaryFunction& f, const Sentence& s) {
  return eval_function_sentence(f.relabelled(), s);
}

}  // namespace zeroone
