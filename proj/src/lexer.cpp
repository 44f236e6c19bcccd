#include "lexer.hpp"

#include <cctype>

namespace bienforce::detail {

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = column;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      t.kind = Token::Kind::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = text.substr(i, j - i);
      t.num = std::stoll(t.text);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    auto two = i + 1 < text.size() ? text.substr(i, 2) : std::string();
    if (two == "!=" || two == "<=" || two == ">=" || two == "&&" || two == "||") {
      t.kind = Token::Kind::Punct;
      t.text = two;
      advance(2);
      out.push_back(t);
      continue;
    }
    static const std::string singles = "?!.,()[]<>=+&|_";
    if (singles.find(c) != std::string::npos) {
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(t);
      continue;
    }
    throw ParseError("SyntaxError", std::string("unexpected character '") + c + "'", line,
                     column);
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

std::size_t matching_bracket(const std::vector<Token>& tokens, std::size_t open) {
  // Parens only: `<`/`>` double as comparison operators, but parentheses are
  // balanced in every well-formed term regardless of angle-bracket content.
  int paren = 0;
  for (std::size_t j = open; j < tokens.size(); ++j) {
    const Token& t = tokens[j];
    if (t.kind != Token::Kind::Punct) continue;
    if (t.text == "(") ++paren;
    if (t.text == ")") --paren;
    if (paren == 0) return j;
  }
  return tokens.size();
}

}  // namespace bienforce::detail
