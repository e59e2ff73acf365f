#pragma once

#include <string_view>

#include "zeroone/formula.hpp"

namespace zeroone {

/// Parses a closed sentence in the concrete syntax
///
///   formula := 'exists' IDENT '.' formula | 'forall' IDENT '.' formula | iff
///   iff     := imp ('<->' imp)*        (right-associative)
///   imp     := disj ('->' disj)*       (right-associative)
///   disj    := conj ('|' conj)*        (n-ary)
///   conj    := neg ('&' neg)*          (n-ary)
///   neg     := '!' neg | '(' formula ')' | atom
///   atom    := IDENT '=' IDENT | IDENT '<' IDENT | IDENT '~' IDENT
///            | 'F' '(' IDENT ',' IDENT ')' '=' IDENT
///
/// '#' starts a comment running to end of line. Chains of '&' and '|' parse
/// to one n-ary node. Throws SyntaxError, FreeVariableError, VocabularyError.
Sentence parse_sentence(std::string_view text, Vocabulary vocabulary);

}  // namespace zeroone
