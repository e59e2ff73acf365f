#pragma once

#include "zeroone/formula.hpp"
#include "zeroone/models.hpp"

namespace zeroone {

/// Desk-scale guard: the oracle refuses when m^depth exceeds this.
inline constexpr std::uint64_t kOracleCostCap = 1'000'000'000ULL;

/// Tarskian evaluation of a GraphOrder sentence on G. Exists over the empty
/// universe is false, Forall true. Deliberately the slowest, most obviously
/// correct path in the project; everything else is checked against it.
bool eval_graph_sentence(const OrderedGraph& g, const Sentence& s);

/// Evaluation of a BinaryFunction sentence on a total two-place function.
bool eval_function_sentence(const BinaryFunctionTable& f, const Sentence& s);

/// Rejects partial inputs with PartialModelError; callers condition on total
/// definedness first.
bool eval_function_sentence(const PartialBinaryFunction& f, const Sentence& s);

}  // namespace zeroone
