#include "doctest.h"
#include "support/fuzz.hpp"
#include "support/suite.hpp"
#include "zeroone/parser.hpp"
#include "zeroone/semantics.hpp"

using namespace zeroone;
using namespace zeroone::testsupport;

TEST_CASE("smallest closed sentence parses") {
  const Sentence s = parse_sentence("exists x. x = x", Vocabulary::graph_order());
  CHECK(s.depth == 1);
  REQUIRE(s.formula->kind == NodeKind::Exists);
  CHECK(s.formula->bound_var == "x");
  const auto& body = s.formula->children[0];
  REQUIRE(body->kind == NodeKind::Atom);
  CHECK(body->atom == AtomKind::Eq);
  CHECK(body->atom_vars == std::vector<std::string>{"x", "x"});
}

TEST_CASE("the forall-exists adjacency sentence parses at depth 2") {
  const Sentence s = parse_sentence("forall x. exists y. x ~ y", Vocabulary::graph_order());
  CHECK(s.depth == 2);
  REQUIRE(s.formula->kind == NodeKind::Forall);
  REQUIRE(s.formula->children[0]->kind == NodeKind::Exists);
  CHECK(s.formula->children[0]->children[0]->atom == AtomKind::Adj);
}

TEST_CASE("function atoms need the function vocabulary") {
  const Sentence s = parse_sentence("forall x. F(x, x) = x", Vocabulary::binary_function());
  REQUIRE(s.formula->children[0]->kind == NodeKind::Atom);
  CHECK(s.formula->children[0]->atom == AtomKind::FuncEq);
  CHECK(s.formula->children[0]->atom_vars == std::vector<std::string>{"x", "x", "x"});

  CHECK_NOTHROW(parse_sentence("forall x. exists y. F(x, y) = x", Vocabulary::binary_function()));

  CHECK_THROWS_AS(parse_sentence("forall x. F(x, x) = x", Vocabulary::graph_order()),
                  VocabularyError);
  CHECK_THROWS_AS(parse_sentence("exists x. exists y. x ~ y", Vocabulary::binary_function()),
                  VocabularyError);
  CHECK_THROWS_AS(parse_sentence("exists x. exists y. x < y", Vocabulary::binary_function()),
                  VocabularyError);
}

TEST_CASE("free variables are rejected with their name") {
  try {
    parse_sentence("exists x. x ~ y", Vocabulary::graph_order());
    FAIL("expected FreeVariableError");
  } catch (const FreeVariableError& e) {
    CHECK(e.name == "y");
  }
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_sentence("exists . x = x", Vocabulary::graph_order());
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position == 7);
  }
  CHECK_THROWS_AS(parse_sentence("exists x x = x", Vocabulary::graph_order()), SyntaxError);
  CHECK_THROWS_AS(parse_sentence("exists x. x =", Vocabulary::graph_order()), SyntaxError);
  CHECK_THROWS_AS(parse_sentence("exists x. (x = x", Vocabulary::graph_order()), SyntaxError);
  CHECK_THROWS_AS(parse_sentence("", Vocabulary::graph_order()), SyntaxError);
  CHECK_THROWS_AS(parse_sentence("exists x. x = x )", Vocabulary::graph_order()), SyntaxError);
}

TEST_CASE("comments and precedence") {
  const Sentence s = parse_sentence(
      "forall x. x = x -> x < x | x ~ x & !x = x  # tail comment\n", Vocabulary::graph_order());
  const auto& body = s.formula->children[0];
  REQUIRE(body->kind == NodeKind::Implies);
  REQUIRE(body->children[1]->kind == NodeKind::Or);
  REQUIRE(body->children[1]->children[1]->kind == NodeKind::And);
  CHECK(body->children[1]->children[1]->children[1]->kind == NodeKind::Not);
}

TEST_CASE("arrow chains are right-associative, &/| chains are n-ary") {
  const Sentence s =
      parse_sentence("forall x. (x = x -> x < x -> x ~ x)", Vocabulary::graph_order());
  const auto& imp = s.formula->children[0];
  REQUIRE(imp->kind == NodeKind::Implies);
  CHECK(imp->children[1]->kind == NodeKind::Implies);

  const Sentence c = parse_sentence("forall x. (x = x & x < x & x ~ x)", Vocabulary::graph_order());
  CHECK(c.formula->children[0]->children.size() == 3);
}

TEST_CASE("desugar definitions") {
  auto a = Formula::make_atom(AtomKind::Eq, {"x", "x"});
  auto b = Formula::make_atom(AtomKind::Less, {"x", "x"});

  const auto imp = desugar(Formula::make_implies(a, b));
  REQUIRE(imp->kind == NodeKind::Or);
  CHECK(imp->children[0]->kind == NodeKind::Not);
  CHECK(structurally_equal(imp->children[0]->children[0], a));
  CHECK(structurally_equal(imp->children[1], b));

  const auto iff = desugar(Formula::make_iff(a, b));
  const auto expected = Formula::make_and(
      {Formula::make_or({Formula::make_not(a), b}), Formula::make_or({Formula::make_not(b), a})});
  CHECK(structurally_equal(iff, expected));

  CHECK(structurally_equal(desugar(iff), iff));  // idempotence on the example
}

TEST_CASE("quantifier depth") {
  CHECK(parse_sentence("exists x. x = x", Vocabulary::graph_order()).depth == 1);
  CHECK(parse_sentence("forall x. exists y. x ~ y", Vocabulary::graph_order()).depth == 2);
  // Connectives do not add depth: an Iff of two depth-1 bodies stays at 1.
  const Sentence s = parse_sentence("(exists x. x = x) <-> (exists y. y = y)",
                                    Vocabulary::graph_order());
  CHECK(s.depth == 1);
  CHECK(quantifier_depth(desugar(s.formula)) == 1);
}

TEST_CASE("pretty-print round trip on fuzzed formulas") {
  RngStream rng(2024);
  for (int round = 0; round < 250; ++round) {
    const Vocabulary vocab =
        round % 2 == 0 ? Vocabulary::graph_order() : Vocabulary::binary_function();
    const FormulaPtr f = random_closed_formula(rng, vocab, 2 + static_cast<int>(rng.uniform_below(5)));
    const std::string text = pretty_print(f);
    CAPTURE(text);
    const Sentence back = parse_sentence(text, vocab);
    CHECK(structurally_equal(back.formula, f));
  }
}

TEST_CASE("desugar preserves the oracle verdict and the quantifier depth") {
  RngStream rng(555);
  std::vector<OrderedGraph> graphs;
  for (std::uint64_t mask = 0; mask < 8; ++mask) {  // all graphs on 3 vertices
    OrderedGraph g(3);
    if (mask & 1) g.set_edge(1, 2, true);
    if (mask & 2) g.set_edge(1, 3, true);
    if (mask & 4) g.set_edge(2, 3, true);
    graphs.push_back(g);
  }
  for (int m : {0, 1, 4, 5}) {
    RngStream gr = rng.branch(100 + static_cast<std::uint64_t>(m));
    graphs.push_back(m >= 1 ? sample_graph(m, 0.5, gr) : OrderedGraph(0));
  }

  for (int round = 0; round < 120; ++round) {
    const FormulaPtr f = random_closed_formula(rng, Vocabulary::graph_order(), 3);
    const FormulaPtr ds = desugar(f);
    CHECK(quantifier_depth(ds) == quantifier_depth(f));
    const Sentence original = Sentence::make(f, Vocabulary::graph_order());
    const Sentence desugared = Sentence::make(ds, Vocabulary::graph_order());
    for (const auto& g : graphs) {
      CHECK(eval_graph_sentence(g, original) == eval_graph_sentence(g, desugared));
    }
  }

  RngStream frng(556);
  for (int round = 0; round < 60; ++round) {
    const FormulaPtr f = random_closed_formula(frng, Vocabulary::binary_function(), 3);
    const Sentence original = Sentence::make(f, Vocabulary::binary_function());
    const Sentence desugared = Sentence::make(desugar(f), Vocabulary::binary_function());
    for (int m : {1, 2, 3}) {
      RngStream mr = frng.branch(900 + static_cast<std::uint64_t>(10 * round + m));
      const BinaryFunctionTable table = sample_binary_function(m, mr);
      CHECK(eval_function_sentence(table, original) == eval_function_sentence(table, desugared));
    }
  }
}
