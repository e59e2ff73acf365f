#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zeroone/formula.hpp"
#include "zeroone/models.hpp"

namespace zeroone {

enum class GateKind : std::uint8_t { Const, Lit, And, Or };

struct Literal {
  std::uint32_t var;  // 1-based input index
  bool positive;
};

/// One gate of a negation-normal-form circuit. Negation exists only as the
/// sign on literals; And/Or have unbounded fan-in >= 1.
struct Gate {
  GateKind kind;
  bool value = false;                   // Const
  std::uint32_t var = 0;                // Lit, 1-based
  bool positive = true;                 // Lit
  std::vector<std::uint32_t> children;  // And/Or, indices into the gate array
};

/// Unbounded-fan-in DAG over inputs z_1..z_m. Children strictly precede their
/// parent in the array; immutable once built.
struct Circuit {
  std::uint32_t num_inputs = 0;
  std::vector<Gate> gates;
  std::uint32_t output = 0;
};

/// Append-only builder with mandatory constant folding: And with a false child
/// folds to false, true children are dropped, identical children deduplicated,
/// empty gates become constants, single-child gates collapse to the child.
/// Literals and constants are cached so repeated uses share one gate.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::uint32_t num_inputs);

  std::uint32_t constant(bool value);
  std::uint32_t literal(std::uint32_t var, bool positive);  // var is 1-based
  std::uint32_t and_gate(std::vector<std::uint32_t> children);
  std::uint32_t or_gate(std::vector<std::uint32_t> children);

  const Gate& gate(std::uint32_t index) const { return gates_[index]; }

  /// Compacts to the gates reachable from `output`, preserving order.
  Circuit finish(std::uint32_t output) &&;

 private:
  std::uint32_t append(Gate g);
  std::uint32_t combine(GateKind kind, std::vector<std::uint32_t> children);

  std::uint32_t num_inputs_;
  std::vector<Gate> gates_;
  std::int64_t const_cache_[2] = {-1, -1};
  std::vector<std::int64_t> lit_cache_;  // 2 slots per var: [positive, negative]
};

/// Sentence compiled against a fixed host graph: primitives fold to constants,
/// exists x W becomes OR_x (z_x AND W*(x)), forall x W becomes
/// AND_x (!z_x OR W*(x)), negation is pushed onto literals.
/// The circuit at indicator(S) equals the oracle on the induced substructure.
Circuit compile_graph_sentence(const OrderedGraph& g, const Sentence& s);

/// Function-model compiler: the atom F(a,b)=c expands over witnesses d with
/// F*(a,b,d)=c into AND_{y<d} !z_{F*(a,b,y)} AND z_{F*(a,b,d)} (minimal hit in
/// S), OR-ed over d; an entry left undefined by S makes the atom false.
Circuit compile_function_sentence(const TernaryFunction& f, const Sentence& s);

/// Single bottom-up pass; assignment has num_inputs entries of 0/1.
bool eval_circuit(const Circuit& c, const std::vector<std::uint8_t>& assignment);

/// Folds literals decided by rho to constants and propagates; the result
/// mentions only starred variables and agrees with the original on every
/// completion of the stars.
Circuit apply_restriction(const Circuit& c, const Restriction& rho);

/// Reindexes a restricted circuit onto the starred variables in star-rank
/// order; the result has rho.star_count() inputs. Requires that c mentions
/// only starred variables (apply_restriction guarantees this).
Circuit project_to_stars(const Circuit& c, const Restriction& rho);

enum class BottomKind { Or, And, Auto };

/// Alternating-homogeneous-levels form: level 0 holds literals/constants,
/// every level >= 1 is all-And or all-Or, kinds alternate, and each gate's
/// children sit exactly one level below (unary pass-through gates are inserted
/// as needed). Depth at most doubles plus one.
struct LayeredCircuit {
  Circuit circuit;
  std::vector<std::uint32_t> level;  // per gate
  std::uint32_t depth = 0;

  GateKind kind_at_level(std::uint32_t level_index) const;
};

LayeredCircuit to_levelled(const Circuit& c, BottomKind bottom = BottomKind::Or);

struct CircuitStats {
  std::uint32_t depth = 0;
  std::size_t gate_count = 0;           // everything, literals and constants included
  std::size_t internal_gate_count = 0;  // And/Or nodes built on top of the inputs;
                                        // the d_A * m^{d_A} certificate counts these
  std::vector<std::size_t> per_level_counts;   // index 0 = literals/constants
  std::vector<std::size_t> level1_fanins;      // one entry per level-1 gate
};

CircuitStats circuit_stats(const Circuit& c);
CircuitStats circuit_stats(const LayeredCircuit& c);

/// Longest literal-to-output path counting And/Or gates only.
std::uint32_t circuit_depth(const Circuit& c);

/// Checks the DAG ordering, fan-in, and literal-range invariants; throws
/// std::logic_error on violation.
void validate_circuit(const Circuit& c);

std::string dump_circuit(const Circuit& c);
Circuit parse_circuit_dump(std::string_view text);

}  // namespace zeroone
