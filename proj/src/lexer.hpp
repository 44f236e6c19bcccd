#pragma once

#include <string>
#include <vector>

#include "bienforce/errors.hpp"

namespace bienforce::detail {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;  // identifier name or punctuation spelling
  long long num = 0;
  int line = 1;
  int column = 1;
};

// Tokenizes the shared surface grammar. Multi-character punctuation:
// != <= >= && ||. `# ...` comments run to end of line.
std::vector<Token> tokenize(const std::string& text);

// Token cursor with one-token lookahead helpers. Parsers for processes,
// formulas, monitors, traces and config files are all built on it.
class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

  bool is_punct(const std::string& p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == p;
  }
  bool is_ident(const std::string& name, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == name;
  }
  bool accept_punct(const std::string& p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_ident(const std::string& name) {
    if (!is_ident(name)) return false;
    next();
    return true;
  }
  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("expected '" + p + "'");
  }
  std::string expect_ident(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) fail("expected " + what);
    return next().text;
  }
  [[noreturn]] void fail(const std::string& message, const std::string& code = "SyntaxError") const {
    const Token& t = peek();
    std::string at = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(code, message + " at " + at, t.line, t.column);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Index of the token matching the opening (/[/< bracket at `open`, scanning
// (),[],<> nesting. Used to disambiguate prefix heads from grouped terms.
std::size_t matching_bracket(const std::vector<Token>& tokens, std::size_t open);

}  // namespace bienforce::detail
