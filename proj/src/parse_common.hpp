#pragma once

#include <set>
#include <string>

#include "bienforce/core.hpp"
#include "lexer.hpp"

namespace bienforce::detail {

// Reserved words that cannot be used as atoms, ports, or variables.
bool is_keyword(const std::string& s);

// Data variables currently in scope; identifiers outside it parse as
// atom/port literals.
struct Scope {
  std::set<std::string> vars;
  bool bound(const std::string& n) const { return vars.count(n) != 0; }
  Scope with(const std::set<std::string>& more) const {
    Scope s = *this;
    s.vars.insert(more.begin(), more.end());
    return s;
  }
  Scope with(const std::string& one) const {
    Scope s = *this;
    if (one != "_") s.vars.insert(one);
    return s;
  }
};

ExprPtr parse_expr(Cursor& c, const Scope& scope);
CondPtr parse_condition(Cursor& c, const Scope& scope);

// One pattern slot. Binder `(x)`, don't-care `(_)`, or an expression
// (a bare identifier, literal value, tuple, or constructor application).
struct PatSlot {
  enum class Kind { Binder, DontCare, Expr };
  Kind kind = Kind::DontCare;
  std::string name;  // Binder
  ExprPtr expr;      // Expr
};

PatSlot parse_pat_slot(Cursor& c, const Scope& scope);

// `PORT (?|!) PAYLOAD` where expression slots must be a bound variable or a
// ground literal. Used by the monitor grammar.
Pattern parse_pattern_literal(Cursor& c, const Scope& scope);

Action parse_closed_action(Cursor& c);

std::string fresh_name(const std::string& stem, const std::set<std::string>& used);

// All identifiers appearing in a token stream; used to steer fresh names
// away from anything the source text mentions.
std::set<std::string> identifiers_of(const std::vector<Token>& tokens);

}  // namespace bienforce::detail
