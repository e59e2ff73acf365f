#pragma once

#include <string>
#include <vector>

#include "zeroone/parser.hpp"

namespace zeroone::testsupport {

/// Graph-language sentence suite shared by the unit and acceptance tests.
/// Mix of depths 1..3, tautologies, negated quantifiers, and order/adjacency
/// interplay; the first one is the motivating forall-exists example.
inline const std::vector<std::string>& graph_suite_texts() {
  static const std::vector<std::string> texts = {
      "forall x. exists y. x ~ y",
      "exists x. x = x",
      "exists x. exists y. (x < y & x ~ y)",
      "forall x. forall y. (x ~ y -> y ~ x)",
      "exists x. forall y. (y < x -> x ~ y)",
      "forall x. exists y. (x < y | y < x)",
      "exists x. exists y. exists z. (x ~ y & y ~ z & !(x ~ z) & x < z)",
      "forall x. forall y. ((x ~ y & x < y) -> (exists z. (y < z | z ~ x)))",
      "exists x. !(exists y. y < x)",
      "forall x. ((exists y. y ~ x) <-> !(forall y. !(y ~ x)))",
      "exists x. exists y. (x < y & !(x ~ y) & (forall z. ((x < z & z < y) -> z ~ x)))",
  };
  return texts;
}

inline const std::vector<std::string>& function_suite_texts() {
  static const std::vector<std::string> texts = {
      "forall x. F(x, x) = x",
      "forall x. exists y. F(x, y) = x",
      "exists x. F(x, x) = x",
      "forall x. forall y. exists z. F(x, y) = z",
      "exists x. exists y. (!(x = y) & F(x, y) = x & F(y, x) = y)",
      "forall x. exists y. (F(x, y) = y | F(y, x) = x)",
      "exists x. forall y. F(y, x) = x",
      "exists x. !(F(x, x) = x)",
      "forall x. exists y. !(F(x, y) = x)",
      "exists x. !(exists y. F(y, x) = y)",
  };
  return texts;
}

inline std::vector<Sentence> graph_suite() {
  std::vector<Sentence> out;
  for (const auto& text : graph_suite_texts()) {
    out.push_back(parse_sentence(text, Vocabulary::graph_order()));
  }
  return out;
}

inline std::vector<Sentence> function_suite() {
  std::vector<Sentence> out;
  for (const auto& text : function_suite_texts()) {
    out.push_back(parse_sentence(text, Vocabulary::binary_function()));
  }
  return out;
}

}  // namespace zeroone::testsupport
