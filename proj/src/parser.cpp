#include "zeroone/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace zeroone {

namespace {

enum class Tok {
  Ident, Exists, Forall, Dot, LParen, RParen, Comma,
  Eq, Less, Tilde, Amp, Pipe, Bang, Arrow, DArrow, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_space_and_comments();
    current_.pos = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Tok::End, "", pos_};
      return;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string word(text_.substr(start, pos_ - start));
      if (word == "exists") {
        current_ = {Tok::Exists, std::move(word), start};
      } else if (word == "forall") {
        current_ = {Tok::Forall, std::move(word), start};
      } else {
        current_ = {Tok::Ident, std::move(word), start};
      }
      return;
    }
    const std::size_t start = pos_;
    switch (c) {
      case '.': current_ = {Tok::Dot, ".", start}; ++pos_; return;
      case '(': current_ = {Tok::LParen, "(", start}; ++pos_; return;
      case ')': current_ = {Tok::RParen, ")", start}; ++pos_; return;
      case ',': current_ = {Tok::Comma, ",", start}; ++pos_; return;
      case '=': current_ = {Tok::Eq, "=", start}; ++pos_; return;
      case '~': current_ = {Tok::Tilde, "~", start}; ++pos_; return;
      case '&': current_ = {Tok::Amp, "&", start}; ++pos_; return;
      case '|': current_ = {Tok::Pipe, "|", start}; ++pos_; return;
      case '!': current_ = {Tok::Bang, "!", start}; ++pos_; return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          current_ = {Tok::Arrow, "->", start};
          pos_ += 2;
          return;
        }
        throw SyntaxError(start, "'->'");
      case '<':
        if (pos_ + 2 < text_.size() && text_[pos_ + 1] == '-' && text_[pos_ + 2] == '>') {
          current_ = {Tok::DArrow, "<->", start};
          pos_ += 3;
          return;
        }
        current_ = {Tok::Less, "<", start};
        ++pos_;
        return;
      default:
        throw SyntaxError(start, "a token");
    }
  }

  void skip_space_and_comments() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      return;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Tok::End, "", 0};
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) {}

  FormulaPtr parse() {
    auto f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  FormulaPtr formula() {
    if (lexer_.peek().kind == Tok::Exists || lexer_.peek().kind == Tok::Forall) {
      const bool exists = lexer_.take().kind == Tok::Exists;
      Token var = expect(Tok::Ident, "a variable name");
      expect(Tok::Dot, "'.'");
      auto body = formula();  // quantifier body extends maximally right
      return exists ? Formula::make_exists(var.text, std::move(body))
                    : Formula::make_forall(var.text, std::move(body));
    }
    return iff();
  }

  FormulaPtr iff() {
    std::vector<FormulaPtr> parts{implication()};
    while (lexer_.peek().kind == Tok::DArrow) {
      lexer_.take();
      parts.push_back(implication());
    }
    return fold_right(std::move(parts), NodeKind::Iff);
  }

  FormulaPtr implication() {
    std::vector<FormulaPtr> parts{disjunction()};
    while (lexer_.peek().kind == Tok::Arrow) {
      lexer_.take();
      parts.push_back(disjunction());
    }
    return fold_right(std::move(parts), NodeKind::Implies);
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> parts{conjunction()};
    while (lexer_.peek().kind == Tok::Pipe) {
      lexer_.take();
      parts.push_back(conjunction());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return Formula::make_or(std::move(parts));
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> parts{negation()};
    while (lexer_.peek().kind == Tok::Amp) {
      lexer_.take();
      parts.push_back(negation());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return Formula::make_and(std::move(parts));
  }

  FormulaPtr negation() {
    const Token& t = lexer_.peek();
    if (t.kind == Tok::Bang) {
      lexer_.take();
      return Formula::make_not(negation());
    }
    if (t.kind == Tok::LParen) {
      lexer_.take();
      auto f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  FormulaPtr atom() {
    Token lhs = expect(Tok::Ident, "a variable or 'F('");
    // 'F' immediately followed by '(' is the function atom F(x,y)=z.
    if (lhs.text == "F" && lexer_.peek().kind == Tok::LParen) {
      lexer_.take();
      Token x = expect(Tok::Ident, "a variable name");
      expect(Tok::Comma, "','");
      Token y = expect(Tok::Ident, "a variable name");
      expect(Tok::RParen, "')'");
      expect(Tok::Eq, "'='");
      Token z = expect(Tok::Ident, "a variable name");
      return Formula::make_atom(AtomKind::FuncEq, {x.text, y.text, z.text});
    }
    const Token op = lexer_.take();
    AtomKind kind;
    switch (op.kind) {
      case Tok::Eq: kind = AtomKind::Eq; break;
      case Tok::Less: kind = AtomKind::Less; break;
      case Tok::Tilde: kind = AtomKind::Adj; break;
      default:
        throw SyntaxError(op.pos, "'=', '<' or '~'");
    }
    Token rhs = expect(Tok::Ident, "a variable name");
    return Formula::make_atom(kind, {lhs.text, rhs.text});
  }

  static FormulaPtr fold_right(std::vector<FormulaPtr> parts, NodeKind kind) {
    auto result = std::move(parts.back());
    for (std::size_t i = parts.size() - 1; i-- > 0;) {
      result = kind == NodeKind::Implies ? Formula::make_implies(std::move(parts[i]), std::move(result))
                                         : Formula::make_iff(std::move(parts[i]), std::move(result));
    }
    return result;
  }

  Token expect(Tok kind, const char* what) {
    if (lexer_.peek().kind != kind) throw SyntaxError(lexer_.peek().pos, what);
    return lexer_.take();
  }

  Lexer lexer_;
};

}  // namespace

Sentence parse_sentence(std::string_view text, Vocabulary vocabulary) {
  Parser parser(text);
  return Sentence::make(parser.parse(), vocabulary);
}

}  // namespace zeroone
