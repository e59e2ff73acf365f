#pragma once

#include <string>
#include <vector>

#include "zeroone/circuit.hpp"
#include "zeroone/formula.hpp"
#include "zeroone/restriction_lab.hpp"
#include "zeroone/rng.hpp"

namespace zeroone::testsupport {

/// Random closed formula: quantifier-first at the top, shadowing allowed,
/// depth <= max_depth, at most 8 distinct variable names.
inline FormulaPtr random_closed_formula(RngStream& rng, Vocabulary vocab, int max_depth) {
  static const std::vector<std::string> names = {"a", "b", "c", "d", "e", "f2", "g", "h"};
  struct Gen {
    RngStream& rng;
    Vocabulary vocab;
    std::vector<std::string> bound;

    std::string fresh_name() { return names[rng.uniform_below(names.size())]; }

    FormulaPtr atom() {
      auto pick = [&] { return bound[rng.uniform_below(bound.size())]; };
      if (vocab.kind == VocabularyKind::GraphOrder) {
        const auto kinds = {AtomKind::Eq, AtomKind::Less, AtomKind::Adj};
        const AtomKind k = *(kinds.begin() + rng.uniform_below(3));
        return Formula::make_atom(k, {pick(), pick()});
      }
      if (rng.uniform_below(3) == 0) return Formula::make_atom(AtomKind::Eq, {pick(), pick()});
      return Formula::make_atom(AtomKind::FuncEq, {pick(), pick(), pick()});
    }

    FormulaPtr quantifier(int depth) {
      const std::string var = fresh_name();
      bound.push_back(var);
      auto body = gen(depth - 1);
      bound.pop_back();
      return rng.uniform_below(2) == 0 ? Formula::make_exists(var, body)
                                       : Formula::make_forall(var, body);
    }

    FormulaPtr gen(int depth) {
      if (bound.empty()) {
        // Need a binder before any atom can appear.
        if (depth <= 0) {
          return Formula::make_exists("w", Formula::make_atom(AtomKind::Eq, {"w", "w"}));
        }
        return quantifier(depth);
      }
      if (depth <= 0) return atom();
      switch (rng.uniform_below(8)) {
        case 0:
          return atom();
        case 1:
          return Formula::make_not(gen(depth - 1));
        case 2:
        case 3: {
          std::vector<FormulaPtr> children;
          const std::size_t arity = 2 + rng.uniform_below(2);
          for (std::size_t i = 0; i < arity; ++i) children.push_back(gen(depth - 1));
          return rng.uniform_below(2) == 0 ? Formula::make_and(std::move(children))
                                           : Formula::make_or(std::move(children));
        }
        case 4:
          return Formula::make_implies(gen(depth - 1), gen(depth - 1));
        case 5:
          return Formula::make_iff(gen(depth - 1), gen(depth - 1));
        default:
          return quantifier(depth);
      }
    }
  };
  Gen gen{rng, vocab, {}};
  return gen.gen(max_depth);
}

/// Random NNF circuit over m inputs, via the folding builder (so the result
/// honours every Circuit invariant by construction).
inline Circuit random_circuit(RngStream& rng, std::uint32_t m, int max_depth) {
  CircuitBuilder builder(m);
  struct Gen {
    RngStream& rng;
    CircuitBuilder& b;
    std::uint32_t m;

    std::uint32_t gen(int depth) {
      if (depth <= 0 || rng.uniform_below(4) == 0) {
        if (rng.uniform_below(8) == 0) return b.constant(rng.uniform_below(2) == 1);
        return b.literal(static_cast<std::uint32_t>(rng.uniform_below(m)) + 1,
                         rng.uniform_below(2) == 0);
      }
      std::vector<std::uint32_t> children;
      const std::size_t arity = 1 + rng.uniform_below(4);
      for (std::size_t i = 0; i < arity; ++i) children.push_back(gen(depth - 1));
      return rng.uniform_below(2) == 0 ? b.and_gate(std::move(children))
                                       : b.or_gate(std::move(children));
    }
  };
  Gen gen{rng, builder, m};
  const std::uint32_t out = gen.gen(max_depth);
  return std::move(builder).finish(out);
}

/// Random depth-2 shape with bounded groups, for the switching tests.
inline Depth2Circuit random_depth2(RngStream& rng, std::uint32_t num_vars,
                                   std::size_t max_groups, std::size_t max_group_size) {
  Depth2Circuit c2;
  c2.num_inputs = num_vars;
  c2.top = rng.uniform_below(2) == 0 ? GateKind::Or : GateKind::And;
  const std::size_t groups = 1 + rng.uniform_below(max_groups);
  for (std::size_t gi = 0; gi < groups; ++gi) {
    std::vector<Literal> group;
    const std::size_t size = 1 + rng.uniform_below(max_group_size);
    for (std::size_t li = 0; li < size; ++li) {
      group.push_back(Literal{static_cast<std::uint32_t>(rng.uniform_below(num_vars)) + 1,
                              rng.uniform_below(2) == 0});
    }
    c2.groups.push_back(std::move(group));
  }
  return c2;
}

/// Exhaustive truth-table equality over all 2^m assignments (m <= 20).
inline bool circuits_equal_exhaustive(const Circuit& a, const Circuit& b) {
  if (a.num_inputs != b.num_inputs || a.num_inputs > 20) {
    throw std::invalid_argument("exhaustive comparison needs matching inputs, m <= 20");
  }
  const std::uint32_t m = a.num_inputs;
  std::vector<std::uint8_t> assignment(m, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    for (std::uint32_t v = 0; v < m; ++v) assignment[v] = (mask >> v) & 1;
    if (eval_circuit(a, assignment) != eval_circuit(b, assignment)) return false;
  }
  return true;
}

}  // namespace zeroone::testsupport
