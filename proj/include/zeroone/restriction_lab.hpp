#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeroone/batch_eval.hpp"
#include "zeroone/circuit.hpp"
#include "zeroone/models.hpp"
#include "zeroone/rng.hpp"

namespace zeroone {

/// The constants of the restriction induction, as one configuration record.
/// t is the polynomial size exponent (|C| <= n^t); the two roles that epsilon
/// plays are split into star_exponent (the fixed 1/2 driving the residual
/// star budget) and the per-level tolerances eps_level(l) = 1/2^{1+l}.
struct RestrictionConfig {
  double t = 2.0;
  double c0 = 0.0;            // (ln 4) * t
  double star_exponent = 0.5;
  int k = 0;                  // least integer with star_exponent * k >= t
  double c1 = 16.0;           // inversion size budget, "large enough"
  int n0 = 8;                 // warning gate only

  static RestrictionConfig from_size_exponent(double t, double c1 = 16.0, int n0 = 8);

  double eps_level(int level) const;
  std::int64_t k_level(int level) const;  // k_l = k * 2^l
  std::string describe() const;
};

/// Balanced restriction built from disjoint oriented pairs (one 0 and one 1
/// per pair), so balance holds by construction.
struct PairingRestriction {
  std::vector<std::pair<int, int>> pairs;
  Restriction rho;

  PairingRestriction() : rho(0) {}
};

/// The otimes_1 sampler: floor(n/2) disjoint pairs chosen uniformly from
/// [m] = [2n+1], each oriented (0,1) or (1,0) with probability 1/2.
PairingRestriction sample_balanced_restriction(int m, RngStream& rng);

/// Default residual star budget 2*floor(n^star_exponent) + 1 for m = 2n+1.
int default_star_target(int m, double star_exponent = 0.5);

/// The otimes_2 sampler: pairs up starred positions until exactly
/// target_stars stars remain; the result extends rho and stays balanced.
/// ParityError when the number of stars to retire is odd.
Restriction extend_restriction_stars(const Restriction& rho, int target_stars, RngStream& rng);

struct Level1GateRecord {
  std::uint32_t gate = 0;
  std::size_t fanin = 0;
  std::size_t undecided_inputs = 0;
  bool decided = false;
  bool value = false;  // meaningful when decided
};

/// Survival of the gates with one particular fan-in, next to two reference
/// curves: (3/4)^s, which follows from the per-variable marginals of the
/// pairing sampler, and the stronger (1/4)^s, reported for comparison only.
struct FaninBucket {
  std::size_t fanin = 0;
  std::size_t gates = 0;
  std::size_t undecided = 0;
  double undecided_fraction = 0.0;
  double bound_three_quarters = 0.0;
  double bound_one_quarter = 0.0;
};

struct Level1Survey {
  std::size_t level1_gates = 0;
  std::size_t undecided_gates = 0;
  std::size_t max_undecided_fanin = 0;
  double undecided_fraction = 0.0;
  std::vector<Level1GateRecord> gates;
  std::vector<FaninBucket> by_fanin;  // ascending fan-in
};

/// Per-gate survival of level-1 OR gates under a restriction. ShapeError when
/// level 1 is not all-OR.
Level1Survey level1_fanin_survey(const LayeredCircuit& c, const Restriction& rho);

/// Monte-Carlo survival of one OR gate over s fresh positive literals under
/// the otimes_1 sampler, reported against (3/4)^s (derivable from the
/// per-variable marginals) with the stronger (1/4)^s curve side by side.
struct OrSurvivalResult {
  unsigned fanin = 0;
  std::uint64_t trials = 0;
  std::uint64_t undecided = 0;
  double undecided_fraction = 0.0;
  double stderr_ = 0.0;
  double bound_three_quarters = 0.0;
  double bound_one_quarter = 0.0;
};

OrSurvivalResult or_gate_survival_experiment(unsigned s, int m, std::uint64_t trials,
                                             RngStream rng);

/// Binary decision tree over input variables; no variable repeats on a path.
struct DecisionTree {
  struct Node {
    std::int32_t var = -1;  // -1 for leaves
    bool leaf_value = false;
    std::uint32_t child0 = 0;  // var == 0 branch
    std::uint32_t child1 = 0;  // var == 1 branch
  };

  std::vector<Node> nodes;
  std::uint32_t root = 0;
  int depth = 0;

  bool evaluate(const std::vector<std::uint8_t>& assignment) const;
  std::size_t leaf_count(bool value) const;
};

/// Depth-2 normal form: Or-of-Ands (top == Or) or And-of-Ors (top == And);
/// bottom gates are literal lists, literal children count as singletons.
struct Depth2Circuit {
  std::uint32_t num_inputs = 0;
  GateKind top = GateKind::Or;
  std::optional<bool> constant;
  std::vector<std::vector<Literal>> groups;

  static Depth2Circuit from_circuit(const Circuit& c);  // ShapeError on deeper shapes
  Circuit to_circuit() const;
  std::vector<std::uint32_t> variables() const;  // distinct, ascending
  std::size_t max_group_size() const;
};

/// Canonical decision tree: repeatedly take the first bottom gate undetermined
/// under the path assignment, query all its unset variables, recurse. Returns
/// nullopt when some path would exceed max_depth. FaninError when a bottom
/// gate exceeds max_bottom_fanin; at most 20 distinct variables are allowed.
std::optional<DecisionTree> build_decision_tree(const Depth2Circuit& c2, int max_depth,
                                                std::size_t max_bottom_fanin = SIZE_MAX);

/// Reads the dual depth-2 form off a decision tree: Or-of-Ands from the
/// 1-leaves' paths, And-of-Ors from the negated 0-paths. Bottom fan-in is at
/// most the tree depth; size is at most the matching leaf count.
Circuit tree_to_dual_form(const DecisionTree& tree, GateKind target_top,
                          std::uint32_t num_inputs);

/// The d <= 2 endgame experiment: draw a complete restriction with exactly n
/// ones on [2n+1], flip one uniformly chosen zero to one, and estimate both
/// change probabilities, alongside the max-fanin/(2n+1) union bound.
struct FlipSensitivity {
  double rate_zero_to_one = 0.0;
  double stderr_zero_to_one = 0.0;
  double rate_one_to_zero = 0.0;
  double stderr_one_to_zero = 0.0;
  std::uint64_t trials = 0;
  double fanin_bound = 0.0;
};

FlipSensitivity single_flip_sensitivity(const LayeredCircuit& c, std::uint64_t trials,
                                        RngStream rng);

struct PipelineStage {
  std::string name;
  std::uint32_t depth = 0;
  std::size_t gates = 0;
  std::size_t stars = 0;
};

/// One run of compile -> level -> otimes_1 -> restrict -> otimes_2 ->
/// restrict -> per-gate switching -> merged levels. Capped-tree failures are
/// counted; when fallback expansion is on, failing gates are switched by an
/// uncapped canonical tree so the result is always exact and one level
/// shallower (for depth >= 3 inputs). Depth <= 2 inputs go to the single-flip
/// endgame instead.
struct PipelineReport {
  RestrictionConfig config;
  std::uint64_t seed = 0;
  bool below_minimum_n = false;  // n < config.n0: results are warm-up scale
  std::vector<PipelineStage> stages;
  Level1Survey survey;
  std::size_t switch_attempts = 0;
  std::size_t switch_capped_failures = 0;
  std::size_t fallback_expansions = 0;
  std::size_t max_dual_terms = 0;
  std::size_t max_dual_bottom_fanin = 0;
  bool switched = false;
  std::optional<FlipSensitivity> endgame;
  Restriction final_restriction{0};
  Circuit restricted_original;  // levelled original under the final restriction
  Circuit final_circuit;        // switched (or endgame) circuit
  bool equivalence_exhaustive = false;
  std::uint64_t equivalence_samples = 0;
  bool equivalent = false;
};

PipelineReport run_restriction_pipeline(const Circuit& compiled, const RestrictionConfig& config,
                                        std::uint64_t seed,
                                        std::optional<int> tree_cap = std::nullopt,
                                        std::uint64_t endgame_trials = 20000);

}  // namespace zeroone
