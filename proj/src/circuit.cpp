#include "zeroone/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

namespace zeroone {

CircuitBuilder::CircuitBuilder(std::uint32_t num_inputs)
    : num_inputs_(num_inputs), lit_cache_(static_cast<std::size_t>(num_inputs) * 2, -1) {}

std::uint32_t CircuitBuilder::append(Gate g) {
  gates_.push_back(std::move(g));
  return static_cast<std::uint32_t>(gates_.size() - 1);
}

std::uint32_t CircuitBuilder::constant(bool value) {
  auto& slot = const_cache_[value ? 1 : 0];
  if (slot < 0) {
    Gate g;
    g.kind = GateKind::Const;
    g.value = value;
    slot = append(std::move(g));
  }
  return static_cast<std::uint32_t>(slot);
}

std::uint32_t CircuitBuilder::literal(std::uint32_t var, bool positive) {
  if (var < 1 || var > num_inputs_) throw std::invalid_argument("literal variable out of range");
  auto& slot = lit_cache_[static_cast<std::size_t>(var - 1) * 2 + (positive ? 0 : 1)];
  if (slot < 0) {
    Gate g;
    g.kind = GateKind::Lit;
    g.var = var;
    g.positive = positive;
    slot = append(std::move(g));
  }
  return static_cast<std::uint32_t>(slot);
}

std::uint32_t CircuitBuilder::combine(GateKind kind, std::vector<std::uint32_t> children) {
  const bool is_and = kind == GateKind::And;
  std::vector<std::uint32_t> kept;
  kept.reserve(children.size());
  for (std::uint32_t c : children) {
    const Gate& g = gates_.at(c);
    if (g.kind == GateKind::Const) {
      if (g.value == is_and) continue;       // neutral element: drop
      return constant(!is_and);              // absorbing element: decided
    }
    if (std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
  }
  if (kept.empty()) return constant(is_and);
  if (kept.size() == 1) return kept.front();
  Gate g;
  g.kind = kind;
  g.children = std::move(kept);
  return append(std::move(g));
}

std::uint32_t CircuitBuilder::and_gate(std::vector<std::uint32_t> children) {
  return combine(GateKind::And, std::move(children));
}

std::uint32_t CircuitBuilder::or_gate(std::vector<std::uint32_t> children) {
  return combine(GateKind::Or, std::move(children));
}

Circuit CircuitBuilder::finish(std::uint32_t output) && {
  // Reachability compaction, preserving topological order.
  std::vector<std::uint8_t> live(gates_.size(), 0);
  live[output] = 1;
  for (std::size_t i = gates_.size(); i-- > 0;) {
    if (!live[i]) continue;
    for (std::uint32_t c : gates_[i].children) live[c] = 1;
  }
  std::vector<std::uint32_t> remap(gates_.size(), 0);
  Circuit out;
  out.num_inputs = num_inputs_;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (!live[i]) continue;
    remap[i] = static_cast<std::uint32_t>(out.gates.size());
    Gate g = std::move(gates_[i]);
    for (auto& c : g.children) c = remap[c];
    out.gates.push_back(std::move(g));
  }
  out.output = remap[output];
  return out;
}

namespace {

// Shared quantifier skeleton of both compilers: negation is carried down as a
// flag, so the result is in negation normal form by construction.
template <typename AtomCompile>
class SentenceCompiler {
 public:
  SentenceCompiler(std::uint32_t m, AtomCompile atom_compile)
      : m_(m), builder_(m), atom_compile_(std::move(atom_compile)) {}

  Circuit compile(const FormulaPtr& formula) {
    const std::uint32_t out = visit(desugar(formula), false);
    return std::move(builder_).finish(out);
  }

 private:
  std::uint32_t visit(const FormulaPtr& f, bool negated) {
    switch (f->kind) {
      case NodeKind::Atom:
        return atom_compile_(builder_, *f, env_, negated);
      case NodeKind::Not:
        return visit(f->children[0], !negated);
      case NodeKind::And:
      case NodeKind::Or: {
        std::vector<std::uint32_t> parts;
        parts.reserve(f->children.size());
        for (const auto& c : f->children) parts.push_back(visit(c, negated));
        const bool build_and = (f->kind == NodeKind::And) != negated;
        return build_and ? builder_.and_gate(std::move(parts))
                         : builder_.or_gate(std::move(parts));
      }
      case NodeKind::Exists:
      case NodeKind::Forall: {
        // exists x W  =>  OR_x  (z_x AND W*(x));  forall x W  =>  AND_x (!z_x OR W*(x)).
        const bool as_exists = (f->kind == NodeKind::Exists) != negated;
        std::vector<std::uint32_t> parts;
        parts.reserve(m_);
        for (std::uint32_t e = 1; e <= m_; ++e) {
          env_.emplace_back(&f->bound_var, static_cast<int>(e));
          const std::uint32_t body = visit(f->children[0], negated);
          env_.pop_back();
          if (as_exists) {
            parts.push_back(builder_.and_gate({builder_.literal(e, true), body}));
          } else {
            parts.push_back(builder_.or_gate({builder_.literal(e, false), body}));
          }
        }
        return as_exists ? builder_.or_gate(std::move(parts))
                         : builder_.and_gate(std::move(parts));
      }
      default:
        throw std::logic_error("connective survived desugaring");
    }
  }

 public:
  using Env = std::vector<std::pair<const std::string*, int>>;

 private:
  std::uint32_t m_;
  CircuitBuilder builder_;
  AtomCompile atom_compile_;
  Env env_;
};

int env_lookup(const std::vector<std::pair<const std::string*, int>>& env,
               const std::string& name) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (*it->first == name) return it->second;
  }
  throw std::logic_error("unbound variable in a closed sentence: " + name);
}

}  // namespace

Circuit compile_graph_sentence(const OrderedGraph& g, const Sentence& s) {
  if (s.vocabulary.kind != VocabularyKind::GraphOrder) {
    throw VocabularyError("compile_graph_sentence needs a GraphOrder sentence");
  }
  auto atom_compile = [&g](CircuitBuilder& b, const Formula& atom, const auto& env,
                           bool negated) -> std::uint32_t {
    const int a = env_lookup(env, atom.atom_vars[0]);
    const int c = env_lookup(env, atom.atom_vars[1]);
    bool value = false;
    switch (atom.atom) {
      case AtomKind::Eq:
        value = a == c;
        break;
      case AtomKind::Less:
        value = a < c;
        break;
      case AtomKind::Adj:
        value = g.adjacent(a, c);
        break;
      default:
        throw VocabularyError("function atom in a graph sentence");
    }
    return b.constant(value != negated);
  };
  SentenceCompiler<decltype(atom_compile)> compiler(static_cast<std::uint32_t>(g.size()),
                                                    std::move(atom_compile));
  return compiler.compile(s.formula);
}

Circuit compile_function_sentence(const TernaryFunction& f, const Sentence& s) {
  if (s.vocabulary.kind != VocabularyKind::BinaryFunction) {
    throw VocabularyError("compile_function_sentence needs a BinaryFunction sentence");
  }
  auto atom_compile = [&f](CircuitBuilder& b, const Formula& atom, const auto& env,
                           bool negated) -> std::uint32_t {
    if (atom.atom == AtomKind::Eq) {
      const bool value =
          env_lookup(env, atom.atom_vars[0]) == env_lookup(env, atom.atom_vars[1]);
      return b.constant(value != negated);
    }
    if (atom.atom != AtomKind::FuncEq) {
      throw VocabularyError("graph atom in a function sentence");
    }
    const int a = env_lookup(env, atom.atom_vars[0]);
    const int c = env_lookup(env, atom.atom_vars[1]);
    const int target = env_lookup(env, atom.atom_vars[2]);
    // Positive form: some witness d with F*(a,b,d) = target is the minimal z
    // landing in S, i.e. z_{F*(a,b,d)} holds and every smaller image is out.
    // Negated form is the De Morgan dual, keeping the circuit in NNF.
    std::vector<std::uint32_t> witness_terms;
    for (int d = 1; d <= f.m; ++d) {
      if (f.value(a, c, d) != target) continue;
      std::vector<std::uint32_t> lits;
      lits.reserve(static_cast<std::size_t>(d));
      for (int y = 1; y < d; ++y) {
        lits.push_back(
            b.literal(static_cast<std::uint32_t>(f.value(a, c, y)), negated));
      }
      lits.push_back(b.literal(static_cast<std::uint32_t>(target), !negated));
      witness_terms.push_back(negated ? b.or_gate(std::move(lits))
                                      : b.and_gate(std::move(lits)));
    }
    return negated ? b.and_gate(std::move(witness_terms))
                   : b.or_gate(std::move(witness_terms));
  };
  SentenceCompiler<decltype(atom_compile)> compiler(static_cast<std::uint32_t>(f.m),
                                                    std::move(atom_compile));
  return compiler.compile(s.formula);
}

bool eval_circuit(const Circuit& c, const std::vector<std::uint8_t>& assignment) {
  if (assignment.size() != c.num_inputs) {
    throw std::invalid_argument("assignment size differs from circuit inputs");
  }
  std::vector<std::uint8_t> value(c.gates.size(), 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::Const:
        value[i] = g.value;
        break;
      case GateKind::Lit:
        value[i] = g.positive == (assignment[g.var - 1] != 0);
        break;
      case GateKind::And: {
        std::uint8_t v = 1;
        for (auto ch : g.children) v &= value[ch];
        value[i] = v;
        break;
      }
      case GateKind::Or: {
        std::uint8_t v = 0;
        for (auto ch : g.children) v |= value[ch];
        value[i] = v;
        break;
      }
    }
  }
  return value[c.output] != 0;
}

Circuit apply_restriction(const Circuit& c, const Restriction& rho) {
  if (rho.host_size() != static_cast<int>(c.num_inputs)) {
    throw std::invalid_argument("restriction host size differs from circuit inputs");
  }
  CircuitBuilder builder(c.num_inputs);
  std::vector<std::uint32_t> remap(c.gates.size(), 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::Const:
        remap[i] = builder.constant(g.value);
        break;
      case GateKind::Lit: {
        const RVal v = rho.at(static_cast<int>(g.var));
        if (v == RVal::Star) {
          remap[i] = builder.literal(g.var, g.positive);
        } else {
          remap[i] = builder.constant((v == RVal::One) == g.positive);
        }
        break;
      }
      case GateKind::And:
      case GateKind::Or: {
        std::vector<std::uint32_t> children;
        children.reserve(g.children.size());
        for (auto ch : g.children) children.push_back(remap[ch]);
        remap[i] = g.kind == GateKind::And ? builder.and_gate(std::move(children))
                                           : builder.or_gate(std::move(children));
        break;
      }
    }
  }
  return std::move(builder).finish(remap[c.output]);
}

Circuit project_to_stars(const Circuit& c, const Restriction& rho) {
  if (rho.host_size() != static_cast<int>(c.num_inputs)) {
    throw std::invalid_argument("restriction host size differs from circuit inputs");
  }
  std::vector<std::uint32_t> rank(c.num_inputs + 1, 0);
  std::uint32_t stars = 0;
  for (int v = 1; v <= rho.host_size(); ++v) {
    if (rho.at(v) == RVal::Star) rank[static_cast<std::size_t>(v)] = ++stars;
  }
  Circuit out = c;
  out.num_inputs = stars;
  for (auto& g : out.gates) {
    if (g.kind != GateKind::Lit) continue;
    const std::uint32_t mapped = rank[g.var];
    if (mapped == 0) {
      throw std::invalid_argument("circuit mentions a variable decided by the restriction");
    }
    g.var = mapped;
  }
  return out;
}

GateKind LayeredCircuit::kind_at_level(std::uint32_t level_index) const {
  if (level_index == 0 || depth == 0) return GateKind::Lit;
  // Kinds alternate; the parity is read off any gate, levels are homogeneous.
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    if (level[i] == level_index) return circuit.gates[i].kind;
  }
  throw std::logic_error("empty level in a layered circuit");
}

namespace {

LayeredCircuit levelled_with_bottom(const Circuit& c, GateKind bottom_kind) {
  // kind_for(level): bottom_kind at level 1, alternating upward.
  auto kind_for = [bottom_kind](std::uint32_t level) {
    const bool odd = level % 2 == 1;
    return odd == (bottom_kind == GateKind::Or) ? GateKind::Or : GateKind::And;
  };

  LayeredCircuit out;
  out.circuit.num_inputs = c.num_inputs;
  auto& gates = out.circuit.gates;
  auto& levels = out.level;

  auto append = [&gates, &levels](Gate g, std::uint32_t level) {
    gates.push_back(std::move(g));
    levels.push_back(level);
    return static_cast<std::uint32_t>(gates.size() - 1);
  };

  // lift_cache[(gate, level)]: pass-through chain endpoint for reuse.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> lift_cache(c.gates.size());
  std::vector<std::uint32_t> base(c.gates.size(), 0);        // translated gate
  std::vector<std::uint32_t> base_level(c.gates.size(), 0);  // its level

  auto lift = [&](std::uint32_t original, std::uint32_t target) -> std::uint32_t {
    std::uint32_t idx = base[original];
    std::uint32_t at = base_level[original];
    if (at == target) return idx;
    for (auto& [lvl, cached] : lift_cache[original]) {
      if (lvl == target) return cached;
    }
    // Grow the chain one level at a time, caching intermediate stops.
    for (std::uint32_t lvl = at + 1; lvl <= target; ++lvl) {
      bool found = false;
      for (auto& [cached_lvl, cached] : lift_cache[original]) {
        if (cached_lvl == lvl) {
          idx = cached;
          found = true;
          break;
        }
      }
      if (!found) {
        Gate pass;
        pass.kind = kind_for(lvl);
        pass.children = {idx};
        idx = append(std::move(pass), lvl);
        lift_cache[original].emplace_back(lvl, idx);
      }
    }
    return idx;
  };

  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == GateKind::Const || g.kind == GateKind::Lit) {
      base[i] = append(g, 0);
      base_level[i] = 0;
      continue;
    }
    std::uint32_t child_max = 0;
    for (auto ch : g.children) child_max = std::max(child_max, base_level[ch]);
    std::uint32_t level = child_max + 1;
    if (kind_for(level) != g.kind) ++level;
    Gate translated;
    translated.kind = g.kind;
    translated.children.reserve(g.children.size());
    for (auto ch : g.children) translated.children.push_back(lift(ch, level - 1));
    base[i] = append(std::move(translated), level);
    base_level[i] = level;
  }

  out.circuit.output = base[c.output];
  out.depth = base_level[c.output];
  return out;
}

}  // namespace

LayeredCircuit to_levelled(const Circuit& c, BottomKind bottom) {
  switch (bottom) {
    case BottomKind::Or:
      return levelled_with_bottom(c, GateKind::Or);
    case BottomKind::And:
      return levelled_with_bottom(c, GateKind::And);
    case BottomKind::Auto: {
      auto with_or = levelled_with_bottom(c, GateKind::Or);
      auto with_and = levelled_with_bottom(c, GateKind::And);
      return with_and.depth < with_or.depth ? with_and : with_or;
    }
  }
  throw std::logic_error("unreachable");
}

std::uint32_t circuit_depth(const Circuit& c) {
  std::vector<std::uint32_t> depth(c.gates.size(), 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == GateKind::Const || g.kind == GateKind::Lit) continue;
    std::uint32_t d = 0;
    for (auto ch : g.children) d = std::max(d, depth[ch]);
    depth[i] = d + 1;
  }
  return depth[c.output];
}

namespace {

CircuitStats stats_from_levels(const Circuit& c, const std::vector<std::uint32_t>& level,
                               std::uint32_t depth) {
  CircuitStats stats;
  stats.depth = depth;
  stats.gate_count = c.gates.size();
  stats.per_level_counts.assign(static_cast<std::size_t>(depth) + 1, 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto lvl = std::min<std::uint32_t>(level[i], depth);
    ++stats.per_level_counts[lvl];
    if (c.gates[i].kind == GateKind::And || c.gates[i].kind == GateKind::Or) {
      ++stats.internal_gate_count;
    }
    if (level[i] == 1) stats.level1_fanins.push_back(c.gates[i].children.size());
  }
  return stats;
}

}  // namespace

CircuitStats circuit_stats(const Circuit& c) {
  // Levels by longest path from the inputs; level-1 gates see only atoms.
  std::vector<std::uint32_t> level(c.gates.size(), 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == GateKind::Const || g.kind == GateKind::Lit) continue;
    std::uint32_t d = 0;
    for (auto ch : g.children) d = std::max(d, level[ch]);
    level[i] = d + 1;
  }
  return stats_from_levels(c, level, level[c.output]);
}

CircuitStats circuit_stats(const LayeredCircuit& c) {
  return stats_from_levels(c.circuit, c.level, c.depth);
}

void validate_circuit(const Circuit& c) {
  if (c.gates.empty()) throw std::logic_error("circuit has no gates");
  if (c.output >= c.gates.size()) throw std::logic_error("output index out of range");
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::Const:
        break;
      case GateKind::Lit:
        if (g.var < 1 || g.var > c.num_inputs) throw std::logic_error("literal out of range");
        break;
      case GateKind::And:
      case GateKind::Or:
        if (g.children.empty()) throw std::logic_error("And/Or gate with no children");
        for (auto ch : g.children) {
          if (ch >= i) throw std::logic_error("child does not precede its parent");
        }
        break;
    }
  }
}

std::string dump_circuit(const Circuit& c) {
  std::ostringstream out;
  out << "m=" << c.num_inputs << "\n";
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    out << "g" << i << " = ";
    switch (g.kind) {
      case GateKind::Const:
        out << "CONST " << (g.value ? 1 : 0);
        break;
      case GateKind::Lit:
        out << "LIT " << (g.positive ? "+" : "-") << " " << g.var;
        break;
      case GateKind::And:
      case GateKind::Or:
        out << (g.kind == GateKind::And ? "AND" : "OR");
        for (auto ch : g.children) out << " g" << ch;
        break;
    }
    out << "\n";
  }
  out << "OUTPUT g" << c.output << "\n";
  return out.str();
}

namespace {

std::uint32_t parse_gate_ref(std::string_view field, std::size_t limit) {
  if (field.size() < 2 || field[0] != 'g') throw FormatError("expected gate reference g<k>");
  std::uint32_t idx = 0;
  auto [ptr, ec] = std::from_chars(field.data() + 1, field.data() + field.size(), idx);
  if (ec != std::errc() || ptr != field.data() + field.size() || idx >= limit) {
    throw FormatError("bad gate reference: '" + std::string(field) + "'");
  }
  return idx;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Circuit parse_circuit_dump(std::string_view text) {
  Circuit c;
  bool have_output = false;
  std::size_t pos = 0;
  std::size_t gate_index = 0;
  bool have_m = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!have_m) {
      if (line.substr(0, 2) != "m=") throw FormatError("expected 'm=<int>' header line");
      int m = 0;
      auto [p, ec] = std::from_chars(line.data() + 2, line.data() + line.size(), m);
      if (ec != std::errc() || p != line.data() + line.size() || m < 0) {
        throw FormatError("bad input count");
      }
      c.num_inputs = static_cast<std::uint32_t>(m);
      have_m = true;
      continue;
    }
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields[0] == "OUTPUT") {
      if (fields.size() != 2) throw FormatError("OUTPUT line needs one gate reference");
      c.output = parse_gate_ref(fields[1], c.gates.size());
      have_output = true;
      continue;
    }
    if (fields.size() < 3 || fields[1] != "=") throw FormatError("expected 'g<k> = ...'");
    if (parse_gate_ref(fields[0], gate_index + 1) != gate_index) {
      throw FormatError("gates must be numbered consecutively from g0");
    }
    Gate g;
    const std::string_view op = fields[2];
    if (op == "CONST") {
      if (fields.size() != 4 || (fields[3] != "0" && fields[3] != "1")) {
        throw FormatError("CONST needs a 0/1 argument");
      }
      g.kind = GateKind::Const;
      g.value = fields[3] == "1";
    } else if (op == "LIT") {
      if (fields.size() != 5 || (fields[3] != "+" && fields[3] != "-")) {
        throw FormatError("LIT needs a sign and a variable");
      }
      g.kind = GateKind::Lit;
      g.positive = fields[3] == "+";
      std::uint32_t var = 0;
      auto [p, ec] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), var);
      if (ec != std::errc() || p != fields[4].data() + fields[4].size() || var < 1 ||
          var > c.num_inputs) {
        throw FormatError("literal variable out of range");
      }
      g.var = var;
    } else if (op == "AND" || op == "OR") {
      g.kind = op == "AND" ? GateKind::And : GateKind::Or;
      for (std::size_t i = 3; i < fields.size(); ++i) {
        g.children.push_back(parse_gate_ref(fields[i], gate_index));
      }
      if (g.children.empty()) throw FormatError("And/Or gate with no children");
    } else {
      throw FormatError("unknown gate kind '" + std::string(op) + "'");
    }
    c.gates.push_back(std::move(g));
    ++gate_index;
  }
  if (!have_m) throw FormatError("empty circuit dump");
  if (!have_output) throw FormatError("circuit dump has no OUTPUT line");
  validate_circuit(c);
  return c;
}

}  // namespace zeroone
