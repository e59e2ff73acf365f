#include <cmath>

#include "doctest.h"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"
#include "support/suite.hpp"
#include "zeroone/circuit.hpp"
#include "zeroone/parser.hpp"
#include "zeroone/semantics.hpp"

using namespace zeroone;
using namespace zeroone::testsupport;

namespace {

OrderedGraph path3() {
  OrderedGraph g(3);  // 1 - 2 - 3
  g.set_edge(1, 2, true);
  g.set_edge(2, 3, true);
  return g;
}

std::vector<std::uint8_t> indicator_of_mask(std::uint32_t mask, int m) {
  std::vector<std::uint8_t> z(static_cast<std::size_t>(m), 0);
  for (int v = 0; v < m; ++v) z[static_cast<std::size_t>(v)] = (mask >> v) & 1;
  return z;
}

}  // namespace

TEST_CASE("exists x. x = x compiles to the plain OR of the z variables") {
  const Sentence s = parse_sentence("exists x. x = x", Vocabulary::graph_order());
  const Circuit c = compile_graph_sentence(OrderedGraph(3), s);
  validate_circuit(c);
  REQUIRE(c.gates.size() == 4);
  const Gate& out = c.gates[c.output];
  REQUIRE(out.kind == GateKind::Or);
  REQUIRE(out.children.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const Gate& lit = c.gates[out.children[i]];
    CHECK(lit.kind == GateKind::Lit);
    CHECK(lit.positive);
    CHECK(lit.var == i + 1);
  }
}

TEST_CASE("a primitive that is always false folds the whole circuit") {
  const Sentence s = parse_sentence("exists x. x < x", Vocabulary::graph_order());
  RngStream rng(1);
  const Circuit c = compile_graph_sentence(sample_graph(5, 0.5, rng), s);
  REQUIRE(c.gates.size() == 1);
  CHECK(c.gates[0].kind == GateKind::Const);
  CHECK(!c.gates[0].value);
}

TEST_CASE("the forall-exists compilation matches the displayed formula on a path") {
  const OrderedGraph g = path3();
  const Sentence s = parse_sentence("forall x. exists y. x ~ y", Vocabulary::graph_order());
  const Circuit c = compile_graph_sentence(g, s);
  validate_circuit(c);
  // AND_x [ !z_x OR OR_{y ~ x} z_y ]: on the path 1-2-3 a subset S works iff
  // every member has a neighbour inside S.
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    const bool s1 = mask & 1, s2 = mask & 2, s3 = mask & 4;
    const bool expected = (!s1 || s2) && (!s2 || (s1 || s3)) && (!s3 || s2);
    CHECK(eval_circuit(c, indicator_of_mask(mask, 3)) == expected);
  }
}

TEST_CASE("eval_circuit basics") {
  CircuitBuilder b(3);
  const auto out = b.or_gate({b.literal(1, true), b.literal(2, true), b.literal(3, true)});
  const Circuit c = std::move(b).finish(out);
  CHECK(!eval_circuit(c, {0, 0, 0}));
  CHECK(eval_circuit(c, {0, 1, 0}));

  CircuitBuilder b2(2);
  const Circuit ctrue = std::move(b2).finish(b2.constant(true));
  CHECK(eval_circuit(ctrue, {0, 0}));
  CHECK(eval_circuit(ctrue, {1, 1}));
}

TEST_CASE("builder folding rules") {
  CircuitBuilder b(4);
  const auto z1 = b.literal(1, true);
  const auto z2 = b.literal(2, true);
  CHECK(b.and_gate({z1, b.constant(true)}) == z1);          // true dropped, unary collapsed
  CHECK(b.and_gate({z1, b.constant(false)}) == b.constant(false));
  CHECK(b.or_gate({z1, b.constant(false), z1}) == z1);      // dedup + neutral drop
  CHECK(b.or_gate({z1, b.constant(true)}) == b.constant(true));
  const auto both = b.and_gate({z1, z2, z1});
  CHECK(b.gate(both).children.size() == 2);
  CHECK(b.literal(1, true) == z1);                          // literal cache
}

TEST_CASE("central identity: compiled circuit equals the oracle on every subset") {
  const auto suite = graph_suite();
  RngStream rng(404);
  for (int m : {2, 3, 4, 5, 6}) {
    for (int rep = 0; rep < 3; ++rep) {
      RngStream gr = rng.branch(static_cast<std::uint64_t>(100 * m + rep));
      const OrderedGraph g = sample_graph(m, 0.5, gr);
      for (const auto& s : suite) {
        const Circuit c = compile_graph_sentence(g, s);
        validate_circuit(c);
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
          SubsetSelection sel;
          sel.host_size = m;
          for (int v = 1; v <= m; ++v) {
            if ((mask >> (v - 1)) & 1) sel.members.push_back(v);
          }
          const bool via_circuit = eval_circuit(c, indicator_of_mask(mask, m));
          const bool via_oracle = eval_graph_sentence(induced_substructure(g, sel), s);
          CHECK(via_circuit == via_oracle);
        }
      }
    }
  }
}

TEST_CASE("function compiler: m=1 diagonal atom folds to the literal") {
  TernaryFunction f;
  f.m = 1;
  f.table = {1};
  // The minimal-hit expansion of F(1,1)=1 is the empty prefix conjunction
  // joined with z_1, which is z_1 itself; the existential guard then folds.
  const Sentence e = parse_sentence("exists x. F(x, x) = x", Vocabulary::binary_function());
  const Circuit atom = compile_function_sentence(f, e);
  REQUIRE(atom.gates.size() == 1);
  CHECK(atom.gates[0].kind == GateKind::Lit);
  CHECK(atom.gates[0].var == 1);
  CHECK(atom.gates[0].positive);

  const Sentence s = parse_sentence("forall x. F(x, x) = x", Vocabulary::binary_function());
  const Circuit c = compile_function_sentence(f, s);
  // forall x (z_x => atom); atom = z_1, so the circuit is !z1 | z1... which
  // does not fold (no complementary-literal rule). Verify semantics instead.
  CHECK(eval_circuit(c, {0}));
  CHECK(eval_circuit(c, {1}));
}

TEST_CASE("function compiler agrees with the projection oracle on all subsets") {
  const auto suite = function_suite();
  RngStream rng(505);
  for (int rep = 0; rep < 4; ++rep) {
    RngStream fr = rng.branch(rep);
    const TernaryFunction f = sample_ternary_function(5, fr);
    for (const auto& s : suite) {
      const Circuit c = compile_function_sentence(f, s);
      validate_circuit(c);
      for (std::uint32_t mask = 0; mask < 32; ++mask) {
        SubsetSelection sel;
        sel.host_size = 5;
        for (int v = 1; v <= 5; ++v) {
          if ((mask >> (v - 1)) & 1) sel.members.push_back(v);
        }
        const bool via_circuit = eval_circuit(c, indicator_of_mask(mask, 5));
        if (sel.members.empty()) {
          BinaryFunctionTable empty;
          empty.m = 0;
          CHECK(via_circuit == eval_function_sentence(empty, s));
          continue;
        }
        const PartialBinaryFunction projected = project_function(f, sel);
        if (!projected.totally_defined()) continue;  // conditioned out
        CHECK(via_circuit == eval_function_sentence(projected, s));
      }
    }
  }
}

TEST_CASE("an atom with no witness compiles to constant false") {
  TernaryFunction f;
  f.m = 2;
  f.table.assign(8, 1);  // never maps to 2
  const Sentence s =
      parse_sentence("forall x. F(x, x) = x", Vocabulary::binary_function());
  const Circuit c = compile_function_sentence(f, s);
  // At x=2 the atom F(2,2)=2 has no witness, so z_2 => false; S={2} fails.
  CHECK(!eval_circuit(c, {0, 1}));
  CHECK(eval_circuit(c, {1, 0}));
}

TEST_CASE("compiled size and depth certificates on the suite") {
  RngStream rng(606);
  for (int m : {3, 5, 7, 9, 11}) {
    RngStream gr = rng.branch(m);
    const OrderedGraph g = sample_graph(m, 0.5, gr);
    for (const auto& s : graph_suite()) {
      const Circuit c = compile_graph_sentence(g, s);
      const CircuitStats stats = circuit_stats(c);
      const double bound = s.depth * std::pow(static_cast<double>(m), s.depth);
      CHECK(static_cast<double>(stats.internal_gate_count) <= bound);
      CHECK(stats.depth <= 2 * static_cast<std::uint32_t>(s.depth) + 1);
    }
  }
}

TEST_CASE("apply_restriction folds decided literals") {
  CircuitBuilder b(2);
  const Circuit c = std::move(b).finish(b.or_gate({b.literal(1, true), b.literal(2, true)}));

  Restriction all_star(2);
  const Circuit same = apply_restriction(c, all_star);
  CHECK(circuits_equal_exhaustive(c, same));

  Restriction one_true(2);
  one_true.set(1, RVal::One);
  const Circuit folded = apply_restriction(c, one_true);
  REQUIRE(folded.gates.size() == 1);
  CHECK(folded.gates[0].kind == GateKind::Const);
  CHECK(folded.gates[0].value);
}

TEST_CASE("restricted circuits mention only starred variables") {
  RngStream rng(707);
  for (int round = 0; round < 30; ++round) {
    RngStream r = rng.branch(round);
    const Circuit c = random_circuit(r, 8, 3);
    Restriction rho(8);
    for (int v = 1; v <= 8; ++v) {
      const auto roll = r.uniform_below(3);
      rho.set(v, roll == 0 ? RVal::Zero : roll == 1 ? RVal::One : RVal::Star);
    }
    const Circuit restricted = apply_restriction(c, rho);
    for (const auto& gate : restricted.gates) {
      if (gate.kind == GateKind::Lit) CHECK(rho.at(static_cast<int>(gate.var)) == RVal::Star);
    }
  }
}

TEST_CASE("restriction composition equals the merged restriction") {
  RngStream rng(808);
  for (int round = 0; round < 40; ++round) {
    RngStream r = rng.branch(round);
    const int m = 5 + static_cast<int>(r.uniform_below(8));  // up to 12
    const Circuit c = random_circuit(r, static_cast<std::uint32_t>(m), 3);
    Restriction rho(m);
    Restriction rho_prime(m);
    for (int v = 1; v <= m; ++v) {
      const auto roll = r.uniform_below(3);
      rho.set(v, roll == 0 ? RVal::Zero : roll == 1 ? RVal::One : RVal::Star);
      if (rho.at(v) == RVal::Star) {
        const auto roll2 = r.uniform_below(3);
        rho_prime.set(v, roll2 == 0 ? RVal::Zero : roll2 == 1 ? RVal::One : RVal::Star);
      }
    }
    const Circuit two_step = apply_restriction(apply_restriction(c, rho), rho_prime);
    const Circuit one_step = apply_restriction(c, rho.merged_with(rho_prime));
    CHECK(circuits_equal_exhaustive(two_step, one_step));
  }
}

TEST_CASE("levelling: shapes, alternation, and the depth bound") {
  SUBCASE("a single literal is already level 0") {
    CircuitBuilder b(2);
    const Circuit c = std::move(b).finish(b.literal(2, false));
    const LayeredCircuit layered = to_levelled(c);
    CHECK(layered.depth == 0);
  }

  SUBCASE("fuzzed circuits stay equivalent and alternate properly") {
    RngStream rng(909);
    for (int round = 0; round < 60; ++round) {
      RngStream r = rng.branch(round);
      const int m = 3 + static_cast<int>(r.uniform_below(8));  // up to 10
      const Circuit c = random_circuit(r, static_cast<std::uint32_t>(m), 4);
      const std::uint32_t original_depth = circuit_depth(c);
      const BottomKind bottom = round % 3 == 0   ? BottomKind::And
                                : round % 3 == 1 ? BottomKind::Or
                                                 : BottomKind::Auto;
      const LayeredCircuit layered = to_levelled(c, bottom);
      validate_circuit(layered.circuit);
      CHECK(layered.depth <= 2 * original_depth + 1);
      CHECK(circuits_equal_exhaustive(c, layered.circuit));

      // level invariants
      std::vector<GateKind> kind_at(layered.depth + 1, GateKind::Lit);
      for (std::size_t i = 0; i < layered.circuit.gates.size(); ++i) {
        const Gate& gate = layered.circuit.gates[i];
        const std::uint32_t level = layered.level[i];
        if (level == 0) {
          CHECK((gate.kind == GateKind::Lit || gate.kind == GateKind::Const));
          continue;
        }
        REQUIRE((gate.kind == GateKind::And || gate.kind == GateKind::Or));
        if (kind_at[level] == GateKind::Lit) {
          kind_at[level] = gate.kind;
        } else {
          CHECK(kind_at[level] == gate.kind);  // homogeneous level
        }
        for (auto ch : gate.children) CHECK(layered.level[ch] == level - 1);
      }
      for (std::uint32_t lvl = 2; lvl <= layered.depth; ++lvl) {
        if (kind_at[lvl] != GateKind::Lit && kind_at[lvl - 1] != GateKind::Lit) {
          CHECK(kind_at[lvl] != kind_at[lvl - 1]);  // alternation
        }
      }
    }
  }
}

TEST_CASE("circuit stats read off depth and level-1 fan-ins") {
  CircuitBuilder b(5);
  std::vector<std::uint32_t> lits;
  for (std::uint32_t v = 1; v <= 5; ++v) lits.push_back(b.literal(v, true));
  const Circuit c = std::move(b).finish(b.or_gate(std::move(lits)));
  const CircuitStats stats = circuit_stats(c);
  CHECK(stats.depth == 1);
  REQUIRE(stats.level1_fanins.size() == 1);
  CHECK(stats.level1_fanins[0] == 5);

  CircuitBuilder b2(3);
  const Circuit cfalse = std::move(b2).finish(b2.constant(false));
  const CircuitStats stats2 = circuit_stats(cfalse);
  CHECK(stats2.depth == 0);
  CHECK(stats2.level1_fanins.empty());
}

TEST_CASE("circuit dumps round trip") {
  RngStream rng(111);
  for (int round = 0; round < 25; ++round) {
    RngStream r = rng.branch(round);
    const Circuit c = random_circuit(r, 6, 3);
    const Circuit back = parse_circuit_dump(dump_circuit(c));
    CHECK(back.num_inputs == c.num_inputs);
    CHECK(back.output == c.output);
    REQUIRE(back.gates.size() == c.gates.size());
    CHECK(circuits_equal_exhaustive(c, back));
  }
  CHECK_THROWS_AS(parse_circuit_dump("m=2\ng0 = LIT + 3\nOUTPUT g0\n"), FormatError);
  CHECK_THROWS_AS(parse_circuit_dump("m=2\ng0 = LIT + 1\n"), FormatError);
  CHECK_THROWS_AS(parse_circuit_dump("m=2\ng0 = AND\nOUTPUT g0\n"), FormatError);
  CHECK_THROWS_AS(parse_circuit_dump("g0 = LIT + 1\nOUTPUT g0\n"), FormatError);
}
