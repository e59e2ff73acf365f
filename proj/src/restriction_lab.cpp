#include "zeroone/restriction_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "zeroone/stats.hpp"

namespace zeroone {

RestrictionConfig RestrictionConfig::from_size_exponent(double t, double c1, int n0) {
  if (t <= 0.0) throw std::invalid_argument("size exponent t must be positive");
  RestrictionConfig cfg;
  cfg.t = t;
  cfg.c0 = std::log(4.0) * t;
  cfg.star_exponent = 0.5;
  cfg.k = static_cast<int>(std::ceil(t / cfg.star_exponent));
  while (cfg.star_exponent * cfg.k < t) ++cfg.k;  // guard against rounding
  cfg.c1 = c1;
  cfg.n0 = n0;
  return cfg;
}

double RestrictionConfig::eps_level(int level) const {
  if (level < 0 || level > 62) throw std::invalid_argument("bad level");
  return 1.0 / static_cast<double>(std::uint64_t{1} << (1 + level));
}

std::int64_t RestrictionConfig::k_level(int level) const {
  if (level < 0 || level > 40) throw std::invalid_argument("bad level");
  return static_cast<std::int64_t>(k) << level;
}

std::string RestrictionConfig::describe() const {
  std::ostringstream out;
  out << "t=" << t << " c0=" << c0 << " star_exponent=" << star_exponent << " k=" << k
      << " k_l=k*2^l c1=" << c1 << " n0=" << n0;
  return out.str();
}

namespace {

int half_universe(int m, const char* who) {
  if (m < 3 || m % 2 == 0) {
    throw std::invalid_argument(std::string(who) + ": host size must be odd, m = 2n+1 >= 3");
  }
  return (m - 1) / 2;
}

int isqrt_floor(std::int64_t n) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (static_cast<std::int64_t>(r + 1) * (r + 1) <= n) ++r;
  while (static_cast<std::int64_t>(r) * r > n) --r;
  return r;
}

}  // namespace

PairingRestriction sample_balanced_restriction(int m, RngStream& rng) {
  const int n = half_universe(m, "sample_balanced_restriction");
  const int q = n / 2;
  std::vector<int> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), 1);
  rng.shuffle_prefix(pool, static_cast<std::size_t>(2 * q));
  PairingRestriction out;
  out.rho = Restriction(m);
  out.pairs.reserve(static_cast<std::size_t>(q));
  for (int p = 0; p < q; ++p) {
    const int a = pool[static_cast<std::size_t>(2 * p)];
    const int b = pool[static_cast<std::size_t>(2 * p) + 1];
    const bool a_gets_zero = rng.uniform_below(2) == 0;
    out.rho.set(a, a_gets_zero ? RVal::Zero : RVal::One);
    out.rho.set(b, a_gets_zero ? RVal::One : RVal::Zero);
    out.pairs.emplace_back(a, b);
  }
  return out;
}

int default_star_target(int m, double star_exponent) {
  const int n = half_universe(m, "default_star_target");
  int floor_pow = 0;
  if (star_exponent == 0.5) {
    floor_pow = isqrt_floor(n);
  } else {
    floor_pow = static_cast<int>(std::floor(std::pow(static_cast<double>(n), star_exponent)));
  }
  return 2 * floor_pow + 1;
}

Restriction extend_restriction_stars(const Restriction& rho, int target_stars, RngStream& rng) {
  const auto stars = rho.star_positions();
  const int current = static_cast<int>(stars.size());
  if (target_stars < 0 || target_stars > current) {
    throw std::invalid_argument("target star count exceeds the available stars");
  }
  const int retire = current - target_stars;
  if (retire % 2 != 0) {
    throw ParityError("cannot pair an odd number of retiring stars; adjust the target by one");
  }
  std::vector<int> pool = stars;
  rng.shuffle_prefix(pool, static_cast<std::size_t>(retire));
  Restriction out = rho;
  for (int p = 0; p < retire / 2; ++p) {
    const int a = pool[static_cast<std::size_t>(2 * p)];
    const int b = pool[static_cast<std::size_t>(2 * p) + 1];
    const bool a_gets_zero = rng.uniform_below(2) == 0;
    out.set(a, a_gets_zero ? RVal::Zero : RVal::One);
    out.set(b, a_gets_zero ? RVal::One : RVal::Zero);
  }
  return out;
}

Level1Survey level1_fanin_survey(const LayeredCircuit& c, const Restriction& rho) {
  if (rho.host_size() != static_cast<int>(c.circuit.num_inputs)) {
    throw std::invalid_argument("restriction host size differs from circuit inputs");
  }
  Level1Survey survey;
  for (std::size_t i = 0; i < c.circuit.gates.size(); ++i) {
    if (c.level[i] != 1) continue;
    const Gate& g = c.circuit.gates[i];
    if (g.kind != GateKind::Or) {
      throw ShapeError("level 1 must consist of OR gates for the survival survey");
    }
    Level1GateRecord rec;
    rec.gate = static_cast<std::uint32_t>(i);
    rec.fanin = g.children.size();
    bool any_true = false;
    std::size_t undecided_inputs = 0;
    for (auto ch : g.children) {
      const Gate& leaf = c.circuit.gates[ch];
      if (leaf.kind == GateKind::Const) {
        if (leaf.value) any_true = true;
        continue;
      }
      const RVal v = rho.at(static_cast<int>(leaf.var));
      if (v == RVal::Star) {
        ++undecided_inputs;
      } else if ((v == RVal::One) == leaf.positive) {
        any_true = true;
      }
    }
    rec.undecided_inputs = undecided_inputs;
    rec.decided = any_true || undecided_inputs == 0;
    rec.value = any_true;
    if (!rec.decided) {
      ++survey.undecided_gates;
      survey.max_undecided_fanin = std::max(survey.max_undecided_fanin, undecided_inputs);
    }
    ++survey.level1_gates;
    survey.gates.push_back(rec);
  }
  survey.undecided_fraction =
      survey.level1_gates == 0
          ? 0.0
          : static_cast<double>(survey.undecided_gates) / static_cast<double>(survey.level1_gates);
  for (const auto& rec : survey.gates) {
    auto it = std::find_if(survey.by_fanin.begin(), survey.by_fanin.end(),
                           [&](const FaninBucket& b) { return b.fanin == rec.fanin; });
    if (it == survey.by_fanin.end()) {
      FaninBucket bucket;
      bucket.fanin = rec.fanin;
      bucket.bound_three_quarters = std::pow(0.75, static_cast<double>(rec.fanin));
      bucket.bound_one_quarter = std::pow(0.25, static_cast<double>(rec.fanin));
      survey.by_fanin.push_back(bucket);
      it = survey.by_fanin.end() - 1;
    }
    ++it->gates;
    if (!rec.decided) ++it->undecided;
  }
  std::sort(survey.by_fanin.begin(), survey.by_fanin.end(),
            [](const FaninBucket& a, const FaninBucket& b) { return a.fanin < b.fanin; });
  for (auto& bucket : survey.by_fanin) {
    bucket.undecided_fraction =
        static_cast<double>(bucket.undecided) / static_cast<double>(bucket.gates);
  }
  return survey;
}

OrSurvivalResult or_gate_survival_experiment(unsigned s, int m, std::uint64_t trials,
                                             RngStream rng) {
  if (s < 2 || static_cast<int>(s) > m) {
    throw std::invalid_argument("need 2 <= s <= m fresh literals");
  }
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  CircuitBuilder builder(static_cast<std::uint32_t>(m));
  std::vector<std::uint32_t> lits;
  lits.reserve(s);
  for (unsigned v = 1; v <= s; ++v) lits.push_back(builder.literal(v, true));
  const std::uint32_t out = builder.or_gate(std::move(lits));
  const LayeredCircuit gate = to_levelled(std::move(builder).finish(out));

  OrSurvivalResult result;
  result.fanin = s;
  result.trials = trials;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    RngStream trial_rng = rng.branch(trial);
    const PairingRestriction rho = sample_balanced_restriction(m, trial_rng);
    const Level1Survey survey = level1_fanin_survey(gate, rho.rho);
    if (survey.undecided_gates > 0) ++result.undecided;
  }
  result.undecided_fraction =
      static_cast<double>(result.undecided) / static_cast<double>(trials);
  result.stderr_ = stderr_bernoulli(result.undecided_fraction, trials);
  result.bound_three_quarters = std::pow(0.75, static_cast<double>(s));
  result.bound_one_quarter = std::pow(0.25, static_cast<double>(s));
  return result;
}

FlipSensitivity single_flip_sensitivity(const LayeredCircuit& c, std::uint64_t trials,
                                        RngStream rng) {
  if (c.depth > 2) throw ShapeError("single-flip endgame expects a depth <= 2 circuit");
  const int m = static_cast<int>(c.circuit.num_inputs);
  const int n = half_universe(m, "single_flip_sensitivity");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");

  BatchEvaluator evaluator(c.circuit);
  AssignmentBlock block(c.circuit.num_inputs);
  std::vector<int> pool(static_cast<std::size_t>(m));
  std::uint64_t out[kBlockWords];
  std::uint64_t count01 = 0;
  std::uint64_t count10 = 0;

  const std::size_t pairs_per_block = kBlockBits / 2;
  std::size_t column = 0;
  auto flush = [&](std::size_t used_pairs) {
    evaluator.eval_block(block, out);
    for (std::size_t p = 0; p < used_pairs; ++p) {
      const std::size_t c0 = 2 * p;
      const std::size_t c1 = 2 * p + 1;
      const bool v0 = (out[c0 / 64] >> (c0 % 64)) & 1;
      const bool v1 = (out[c1 / 64] >> (c1 % 64)) & 1;
      if (!v0 && v1) ++count01;
      if (v0 && !v1) ++count10;
    }
    block.clear();
    column = 0;
  };

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    RngStream trial_rng = rng.branch(trial);
    std::iota(pool.begin(), pool.end(), 1);
    trial_rng.shuffle_prefix(pool, static_cast<std::size_t>(n));
    // rho^0: first n entries are the ones; rho^1 flips one uniform zero.
    const std::size_t flip =
        static_cast<std::size_t>(n) +
        static_cast<std::size_t>(trial_rng.uniform_below(static_cast<std::uint64_t>(m - n)));
    for (int j = 0; j < n; ++j) {
      block.set(static_cast<std::uint32_t>(pool[static_cast<std::size_t>(j)]), column);
      block.set(static_cast<std::uint32_t>(pool[static_cast<std::size_t>(j)]), column + 1);
    }
    block.set(static_cast<std::uint32_t>(pool[flip]), column + 1);
    column += 2;
    if (column == 2 * pairs_per_block) flush(pairs_per_block);
  }
  if (column > 0) flush(column / 2);

  FlipSensitivity result;
  result.trials = trials;
  result.rate_zero_to_one = static_cast<double>(count01) / static_cast<double>(trials);
  result.rate_one_to_zero = static_cast<double>(count10) / static_cast<double>(trials);
  result.stderr_zero_to_one = stderr_bernoulli(result.rate_zero_to_one, trials);
  result.stderr_one_to_zero = stderr_bernoulli(result.rate_one_to_zero, trials);
  std::size_t max_fanin = 0;
  for (std::size_t i = 0; i < c.circuit.gates.size(); ++i) {
    if (c.level[i] == 1) max_fanin = std::max(max_fanin, c.circuit.gates[i].children.size());
  }
  result.fanin_bound = static_cast<double>(max_fanin) / static_cast<double>(m);
  return result;
}

bool DecisionTree::evaluate(const std::vector<std::uint8_t>& assignment) const {
  std::uint32_t at = root;
  for (;;) {
    const Node& node = nodes[at];
    if (node.var < 0) return node.leaf_value;
    at = assignment[static_cast<std::size_t>(node.var - 1)] ? node.child1 : node.child0;
  }
}

std::size_t DecisionTree::leaf_count(bool value) const {
  std::size_t count = 0;
  for (const auto& node : nodes) {
    if (node.var < 0 && node.leaf_value == value) ++count;
  }
  return count;
}

Depth2Circuit Depth2Circuit::from_circuit(const Circuit& c) {
  Depth2Circuit out;
  out.num_inputs = c.num_inputs;
  const Gate& top = c.gates[c.output];
  auto literal_of = [&](std::uint32_t idx) -> Literal {
    const Gate& g = c.gates[idx];
    if (g.kind != GateKind::Lit) throw ShapeError("depth-2 form expects literals at the bottom");
    return Literal{g.var, g.positive};
  };
  switch (top.kind) {
    case GateKind::Const:
      out.constant = top.value;
      out.top = GateKind::Or;
      return out;
    case GateKind::Lit:
      out.top = GateKind::Or;
      out.groups.push_back({literal_of(c.output)});
      return out;
    case GateKind::And:
    case GateKind::Or: {
      out.top = top.kind;
      const GateKind bottom = top.kind == GateKind::And ? GateKind::Or : GateKind::And;
      for (auto ch : top.children) {
        const Gate& g = c.gates[ch];
        if (g.kind == GateKind::Lit) {
          out.groups.push_back({literal_of(ch)});
        } else if (g.kind == bottom) {
          std::vector<Literal> group;
          group.reserve(g.children.size());
          for (auto leaf : g.children) group.push_back(literal_of(leaf));
          out.groups.push_back(std::move(group));
        } else {
          throw ShapeError("not an Or-of-Ands / And-of-Ors circuit");
        }
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

Circuit Depth2Circuit::to_circuit() const {
  CircuitBuilder b(num_inputs);
  if (constant.has_value()) return std::move(b).finish(b.constant(*constant));
  std::vector<std::uint32_t> group_gates;
  group_gates.reserve(groups.size());
  for (const auto& group : groups) {
    std::vector<std::uint32_t> lits;
    lits.reserve(group.size());
    for (const auto& lit : group) lits.push_back(b.literal(lit.var, lit.positive));
    group_gates.push_back(top == GateKind::Or ? b.and_gate(std::move(lits))
                                              : b.or_gate(std::move(lits)));
  }
  const std::uint32_t out = top == GateKind::Or ? b.or_gate(std::move(group_gates))
                                                : b.and_gate(std::move(group_gates));
  return std::move(b).finish(out);
}

std::vector<std::uint32_t> Depth2Circuit::variables() const {
  std::vector<std::uint32_t> vars;
  for (const auto& group : groups) {
    for (const auto& lit : group) vars.push_back(lit.var);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::size_t Depth2Circuit::max_group_size() const {
  std::size_t mx = 0;
  for (const auto& group : groups) mx = std::max(mx, group.size());
  return mx;
}

namespace {

// Canonical-tree builder state: path assignment pi over the input variables,
// -1 for unset; failure (cap exceeded) unwinds through the optional.
class CanonicalTreeBuilder {
 public:
  CanonicalTreeBuilder(const Depth2Circuit& c2, int max_depth)
      : c2_(c2), max_depth_(max_depth), pi_(c2.num_inputs, -1) {}

  std::optional<DecisionTree> build() {
    auto root = visit(0);
    if (!root.has_value()) return std::nullopt;
    tree_.root = *root;
    tree_.depth = node_depth(*root);
    return std::move(tree_);
  }

 private:
  // Group value under pi: for an Or top the groups are conjunctions, for an
  // And top disjunctions. Returns -1 when undetermined.
  int group_value(const std::vector<Literal>& group) const {
    const bool conjunctive = c2_.top == GateKind::Or;
    bool all_fixed = true;
    for (const auto& lit : group) {
      const int v = pi_[lit.var - 1];
      if (v < 0) {
        all_fixed = false;
        continue;
      }
      const bool lit_true = (v == 1) == lit.positive;
      if (conjunctive && !lit_true) return 0;   // dead term
      if (!conjunctive && lit_true) return 1;   // satisfied clause
    }
    if (all_fixed) return conjunctive ? 1 : 0;
    return -1;
  }

  // Circuit value under pi, or -1 with the first undetermined group reported.
  int circuit_value(std::size_t& first_open) const {
    const bool top_or = c2_.top == GateKind::Or;
    if (c2_.constant.has_value()) return *c2_.constant ? 1 : 0;
    bool any_open = false;
    first_open = c2_.groups.size();
    for (std::size_t gi = 0; gi < c2_.groups.size(); ++gi) {
      const int v = group_value(c2_.groups[gi]);
      if (v == (top_or ? 1 : 0)) return v;  // decides the whole circuit
      if (v < 0 && !any_open) {
        any_open = true;
        first_open = gi;
      }
    }
    if (any_open) return -1;
    return top_or ? 0 : 1;
  }

  std::uint32_t leaf(bool value) {
    DecisionTree::Node node;
    node.var = -1;
    node.leaf_value = value;
    tree_.nodes.push_back(node);
    return static_cast<std::uint32_t>(tree_.nodes.size() - 1);
  }

  std::optional<std::uint32_t> visit(int depth) {
    std::size_t open = 0;
    const int value = circuit_value(open);
    if (value >= 0) return leaf(value == 1);
    // Query all unset variables of the first undetermined bottom gate.
    std::vector<std::uint32_t> block;
    for (const auto& lit : c2_.groups[open]) {
      if (pi_[lit.var - 1] < 0 &&
          std::find(block.begin(), block.end(), lit.var) == block.end()) {
        block.push_back(lit.var);
      }
    }
    if (depth + static_cast<int>(block.size()) > max_depth_) return std::nullopt;
    return chain(block, 0, depth);
  }

  std::optional<std::uint32_t> chain(const std::vector<std::uint32_t>& block, std::size_t at,
                                     int depth) {
    if (at == block.size()) return visit(depth + static_cast<int>(block.size()));
    const std::uint32_t var = block[at];
    pi_[var - 1] = 0;
    auto child0 = chain(block, at + 1, depth);
    pi_[var - 1] = -1;
    if (!child0.has_value()) return std::nullopt;
    pi_[var - 1] = 1;
    auto child1 = chain(block, at + 1, depth);
    pi_[var - 1] = -1;
    if (!child1.has_value()) return std::nullopt;
    DecisionTree::Node node;
    node.var = static_cast<std::int32_t>(var);
    node.child0 = *child0;
    node.child1 = *child1;
    tree_.nodes.push_back(node);
    return static_cast<std::uint32_t>(tree_.nodes.size() - 1);
  }

  int node_depth(std::uint32_t idx) const {
    const auto& node = tree_.nodes[idx];
    if (node.var < 0) return 0;
    return 1 + std::max(node_depth(node.child0), node_depth(node.child1));
  }

  const Depth2Circuit& c2_;
  int max_depth_;
  std::vector<std::int8_t> pi_;
  DecisionTree tree_;
};

}  // namespace

std::optional<DecisionTree> build_decision_tree(const Depth2Circuit& c2, int max_depth,
                                                std::size_t max_bottom_fanin) {
  if (c2.max_group_size() > max_bottom_fanin) {
    throw FaninError("bottom fan-in exceeds the configured k");
  }
  if (c2.variables().size() > 20) {
    throw std::invalid_argument("canonical trees are limited to 20 starred variables");
  }
  if (max_depth < 0) return std::nullopt;
  CanonicalTreeBuilder builder(c2, max_depth);
  return builder.build();
}

Circuit tree_to_dual_form(const DecisionTree& tree, GateKind target_top,
                          std::uint32_t num_inputs) {
  if (target_top != GateKind::And && target_top != GateKind::Or) {
    throw std::invalid_argument("dual form target must be And or Or");
  }
  CircuitBuilder b(num_inputs);
  const bool want_one_leaves = target_top == GateKind::Or;
  std::vector<std::uint32_t> groups;
  std::vector<std::pair<std::uint32_t, bool>> path;

  auto walk = [&](auto&& self, std::uint32_t at) -> void {
    const auto& node = tree.nodes[at];
    if (node.var < 0) {
      if (node.leaf_value != want_one_leaves) return;
      std::vector<std::uint32_t> lits;
      lits.reserve(path.size());
      for (const auto& [var, bit] : path) {
        // Or-of-Ands: the 1-path itself. And-of-Ors: the negation of a 0-path.
        const bool positive = want_one_leaves ? bit : !bit;
        lits.push_back(b.literal(var, positive));
      }
      groups.push_back(want_one_leaves ? b.and_gate(std::move(lits))
                                       : b.or_gate(std::move(lits)));
      return;
    }
    path.emplace_back(static_cast<std::uint32_t>(node.var), false);
    self(self, node.child0);
    path.back().second = true;
    self(self, node.child1);
    path.pop_back();
  };
  walk(walk, tree.root);

  const std::uint32_t out =
      want_one_leaves ? b.or_gate(std::move(groups)) : b.and_gate(std::move(groups));
  return std::move(b).finish(out);
}

namespace {

PipelineStage make_stage(std::string name, const Circuit& c, std::size_t stars) {
  PipelineStage st;
  st.name = std::move(name);
  st.depth = circuit_depth(c);
  st.gates = c.gates.size();
  st.stars = stars;
  return st;
}

// Rebuilds the layered circuit with the bottom two levels of every level-2
// subcircuit inverted via canonical trees, merging the inverted tops into the
// level-3 gates so the result is one level shallower.
Circuit switch_bottom_levels(const LayeredCircuit& layered, int cap, PipelineReport& report) {
  const Circuit& c = layered.circuit;
  CircuitBuilder b(c.num_inputs);
  std::vector<std::uint32_t> mapped(c.gates.size(), 0);
  std::vector<std::uint8_t> is_mapped(c.gates.size(), 0);

  auto translate_dual = [&b](const Circuit& dual) -> std::uint32_t {
    std::vector<std::uint32_t> remap(dual.gates.size(), 0);
    for (std::size_t i = 0; i < dual.gates.size(); ++i) {
      const Gate& g = dual.gates[i];
      switch (g.kind) {
        case GateKind::Const:
          remap[i] = b.constant(g.value);
          break;
        case GateKind::Lit:
          remap[i] = b.literal(g.var, g.positive);
          break;
        case GateKind::And:
        case GateKind::Or: {
          std::vector<std::uint32_t> children;
          children.reserve(g.children.size());
          for (auto ch : g.children) children.push_back(remap[ch]);
          remap[i] = g.kind == GateKind::And ? b.and_gate(std::move(children))
                                             : b.or_gate(std::move(children));
          break;
        }
      }
    }
    return remap[dual.output];
  };

  // Extracts the depth-2 subcircuit rooted at a level-2 gate.
  auto subcircuit_of = [&c](std::uint32_t gate_idx) {
    CircuitBuilder sb(c.num_inputs);
    const Gate& top = c.gates[gate_idx];
    std::vector<std::uint32_t> groups;
    groups.reserve(top.children.size());
    for (auto ch : top.children) {
      const Gate& mid = c.gates[ch];
      std::vector<std::uint32_t> lits;
      if (mid.kind == GateKind::Lit) {
        lits.push_back(sb.literal(mid.var, mid.positive));
      } else if (mid.kind == GateKind::Const) {
        lits.push_back(sb.constant(mid.value));
      } else {
        lits.reserve(mid.children.size());
        for (auto leaf : mid.children) {
          const Gate& lg = c.gates[leaf];
          lits.push_back(lg.kind == GateKind::Const ? sb.constant(lg.value)
                                                    : sb.literal(lg.var, lg.positive));
        }
      }
      const GateKind group_kind =
          mid.kind == GateKind::And || mid.kind == GateKind::Or
              ? mid.kind
              : (top.kind == GateKind::And ? GateKind::Or : GateKind::And);
      groups.push_back(group_kind == GateKind::And ? sb.and_gate(std::move(lits))
                                                   : sb.or_gate(std::move(lits)));
    }
    const std::uint32_t out = top.kind == GateKind::And ? sb.and_gate(std::move(groups))
                                                        : sb.or_gate(std::move(groups));
    return std::move(sb).finish(out);
  };

  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    const std::uint32_t level = layered.level[i];
    if (level == 0) {
      mapped[i] = g.kind == GateKind::Const ? b.constant(g.value) : b.literal(g.var, g.positive);
      is_mapped[i] = 1;
      continue;
    }
    if (level == 1) continue;  // absorbed into the level-2 subcircuits
    if (level == 2) {
      ++report.switch_attempts;
      const Circuit sub = subcircuit_of(static_cast<std::uint32_t>(i));
      const Depth2Circuit d2 = Depth2Circuit::from_circuit(sub);
      const GateKind dual_top = g.kind == GateKind::And ? GateKind::Or : GateKind::And;
      auto tree = build_decision_tree(d2, cap);
      if (!tree.has_value()) {
        ++report.switch_capped_failures;
        const int full_depth = static_cast<int>(d2.variables().size());
        tree = build_decision_tree(d2, full_depth);
        ++report.fallback_expansions;
        if (!tree.has_value()) {
          throw std::logic_error("uncapped canonical tree cannot fail");
        }
      }
      const Circuit dual = tree_to_dual_form(*tree, dual_top, c.num_inputs);
      const CircuitStats dual_stats = circuit_stats(dual);
      report.max_dual_terms =
          std::max(report.max_dual_terms, dual.gates[dual.output].kind == dual_top
                                              ? dual.gates[dual.output].children.size()
                                              : std::size_t{1});
      std::size_t bottom = 0;
      for (auto f : dual_stats.level1_fanins) bottom = std::max(bottom, f);
      report.max_dual_bottom_fanin = std::max(report.max_dual_bottom_fanin, bottom);
      mapped[i] = translate_dual(dual);
      is_mapped[i] = 1;
      continue;
    }
    // Levels >= 3: structural rebuild; level-3 gates splice the children of
    // inverted tops that now share their kind.
    std::vector<std::uint32_t> children;
    children.reserve(g.children.size());
    for (auto ch : g.children) {
      if (!is_mapped[ch]) throw std::logic_error("layered child not yet mapped");
      const std::uint32_t translated = mapped[ch];
      if (level == 3 && b.gate(translated).kind == g.kind) {
        const auto& spliced = b.gate(translated).children;
        children.insert(children.end(), spliced.begin(), spliced.end());
      } else {
        children.push_back(translated);
      }
    }
    mapped[i] = g.kind == GateKind::And ? b.and_gate(std::move(children))
                                        : b.or_gate(std::move(children));
    is_mapped[i] = 1;
  }
  return std::move(b).finish(mapped[c.output]);
}

}  // namespace

PipelineReport run_restriction_pipeline(const Circuit& compiled, const RestrictionConfig& config,
                                        std::uint64_t seed, std::optional<int> tree_cap,
                                        std::uint64_t endgame_trials) {
  const int m = static_cast<int>(compiled.num_inputs);
  const int n = half_universe(m, "run_restriction_pipeline");

  PipelineReport report;
  report.config = config;
  report.seed = seed;
  report.below_minimum_n = n < config.n0;
  report.final_restriction = Restriction(m);
  RngStream rng(seed);

  const LayeredCircuit levelled = to_levelled(compiled, BottomKind::Or);
  report.stages.push_back(make_stage("compiled", compiled, static_cast<std::size_t>(m)));
  {
    PipelineStage st = make_stage("levelled", levelled.circuit, static_cast<std::size_t>(m));
    st.depth = levelled.depth;
    report.stages.push_back(st);
  }

  RngStream rho0_rng = rng.branch(0);
  const PairingRestriction rho0 = sample_balanced_restriction(m, rho0_rng);
  report.survey = level1_fanin_survey(levelled, rho0.rho);
  const Circuit c1 = apply_restriction(levelled.circuit, rho0.rho);
  report.stages.push_back(make_stage("after_otimes1", c1, rho0.rho.star_count()));

  const int target = std::min(default_star_target(m, config.star_exponent),
                              static_cast<int>(rho0.rho.star_count()));
  RngStream rho1_rng = rng.branch(1);
  Restriction rho1 = extend_restriction_stars(rho0.rho, target, rho1_rng);
  report.final_restriction = rho1;
  const Circuit c2 = apply_restriction(levelled.circuit, rho1);
  report.stages.push_back(make_stage("after_otimes2", c2, rho1.star_count()));
  report.restricted_original = c2;

  const LayeredCircuit relevelled = to_levelled(c2, BottomKind::Or);
  {
    PipelineStage st = make_stage("relevelled", relevelled.circuit, rho1.star_count());
    st.depth = relevelled.depth;
    report.stages.push_back(st);
  }
  if (relevelled.depth >= 3) {
    report.switched = true;
    const int cap = tree_cap.value_or(config.k);
    report.final_circuit = switch_bottom_levels(relevelled, cap, report);
    report.stages.push_back(make_stage("switched", report.final_circuit, rho1.star_count()));
  } else {
    report.final_circuit = c2;
    RngStream flip_rng = rng.branch(2);
    report.endgame = single_flip_sensitivity(relevelled, endgame_trials, flip_rng);
    report.stages.push_back(make_stage("endgame", c2, rho1.star_count()));
  }

  // Equivalence of the switched circuit with the restricted original over the
  // remaining stars: exhaustive up to 20 stars, sampled otherwise.
  const auto stars = rho1.star_positions();
  std::vector<std::uint8_t> base(compiled.num_inputs, 0);
  for (int v = 1; v <= m; ++v) {
    if (rho1.at(v) == RVal::One) base[static_cast<std::size_t>(v - 1)] = 1;
  }
  BatchEvaluator eval_final(report.final_circuit);
  BatchEvaluator eval_original(report.restricted_original);
  AssignmentBlock block(compiled.num_inputs);
  std::uint64_t out_final[kBlockWords];
  std::uint64_t out_original[kBlockWords];
  bool equivalent = true;
  std::uint64_t checked = 0;

  auto flush = [&](std::size_t used) {
    eval_final.eval_block(block, out_final);
    eval_original.eval_block(block, out_original);
    for (std::size_t w = 0; w < kBlockWords; ++w) {
      std::uint64_t diff = out_final[w] ^ out_original[w];
      const std::size_t lo = w * 64;
      if (used <= lo) {
        diff = 0;
      } else if (used < lo + 64) {
        diff &= (~std::uint64_t{0}) >> (64 - (used - lo));
      }
      if (diff != 0) equivalent = false;
    }
    block.clear();
  };

  if (stars.size() <= 20) {
    report.equivalence_exhaustive = true;
    const std::uint64_t total = std::uint64_t{1} << stars.size();
    std::size_t column = 0;
    for (std::uint64_t word = 0; word < total; ++word) {
      for (std::uint32_t v = 1; v <= static_cast<std::uint32_t>(m); ++v) {
        if (base[v - 1]) block.set(v, column);
      }
      for (std::size_t si = 0; si < stars.size(); ++si) {
        if ((word >> si) & 1) block.set(static_cast<std::uint32_t>(stars[si]), column);
      }
      ++column;
      ++checked;
      if (column == kBlockBits) {
        flush(column);
        column = 0;
      }
    }
    if (column > 0) flush(column);
  } else {
    report.equivalence_exhaustive = false;
    RngStream eq_rng = rng.branch(3);
    const std::uint64_t total = 10000;
    std::size_t column = 0;
    for (std::uint64_t sample = 0; sample < total; ++sample) {
      for (std::uint32_t v = 1; v <= static_cast<std::uint32_t>(m); ++v) {
        if (base[v - 1]) block.set(v, column);
      }
      for (int star : stars) {
        if (eq_rng.uniform_below(2) == 1) block.set(static_cast<std::uint32_t>(star), column);
      }
      ++column;
      ++checked;
      if (column == kBlockBits) {
        flush(column);
        column = 0;
      }
    }
    if (column > 0) flush(column);
  }
  report.equivalence_samples = checked;
  report.equivalent = equivalent;
  return report;
}

}  // namespace zeroone
