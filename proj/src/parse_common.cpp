#include "parse_common.hpp"

#include <array>

namespace bienforce::detail {

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"tau", "nil",  "rec",  "let", "in",
                                           "if",  "then", "else", "max", "tt",
                                           "ff",  "id",   "true", "false"};
  return kw.count(s) != 0;
}

ExprPtr parse_expr(Cursor& c, const Scope& scope) {
  const Token& t = c.peek();
  if (t.kind == Token::Kind::Int) {
    c.next();
    return expr_const(Value::integer(t.num));
  }
  if (c.is_punct("<")) {
    c.next();
    std::vector<ExprPtr> items;
    items.push_back(parse_expr(c, scope));
    while (c.accept_punct(",")) items.push_back(parse_expr(c, scope));
    c.expect_punct(">");
    if (items.size() < 2) c.fail("tuples need at least two components");
    return expr_tuple(std::move(items));
  }
  if (t.kind == Token::Kind::Ident) {
    if (is_keyword(t.text)) c.fail("'" + t.text + "' is reserved");
    std::string name = c.next().text;
    if (c.is_punct("(")) {
      c.next();
      std::vector<ExprPtr> args;
      args.push_back(parse_expr(c, scope));
      while (c.accept_punct(",")) args.push_back(parse_expr(c, scope));
      c.expect_punct(")");
      return expr_cons(std::move(name), std::move(args));
    }
    if (scope.bound(name)) return expr_var(std::move(name));
    return expr_const(Value::atom(std::move(name)));
  }
  c.fail("expected an expression");
}

namespace {

CondPtr parse_cond_unary(Cursor& c, const Scope& scope);

CondPtr parse_cond_and(Cursor& c, const Scope& scope) {
  CondPtr lhs = parse_cond_unary(c, scope);
  while (c.accept_punct("&&")) lhs = cond_and(lhs, parse_cond_unary(c, scope));
  return lhs;
}

CondPtr parse_cond_or(Cursor& c, const Scope& scope) {
  CondPtr lhs = parse_cond_and(c, scope);
  while (c.accept_punct("||")) lhs = cond_or(lhs, parse_cond_and(c, scope));
  return lhs;
}

CondPtr parse_cond_unary(Cursor& c, const Scope& scope) {
  if (c.accept_punct("!")) return cond_not(parse_cond_unary(c, scope));
  if (c.is_punct("(")) {
    c.next();
    CondPtr inner = parse_cond_or(c, scope);
    c.expect_punct(")");
    return inner;
  }
  if (c.accept_ident("true")) return cond_true();
  if (c.accept_ident("false")) return cond_false();
  ExprPtr lhs = parse_expr(c, scope);
  static const std::array<std::pair<const char*, CmpOp>, 6> ops = {{
      {"=", CmpOp::Eq},
      {"!=", CmpOp::Neq},
      {"<=", CmpOp::Le},
      {">=", CmpOp::Ge},
      {"<", CmpOp::Lt},
      {">", CmpOp::Gt},
  }};
  for (const auto& [sym, op] : ops)
    if (c.accept_punct(sym)) return cond_cmp(op, lhs, parse_expr(c, scope));
  c.fail("expected a comparison operator");
}

}  // namespace

CondPtr parse_condition(Cursor& c, const Scope& scope) { return parse_cond_or(c, scope); }

PatSlot parse_pat_slot(Cursor& c, const Scope& scope) {
  PatSlot slot;
  if (c.is_punct("(") && (c.peek(1).kind == Token::Kind::Ident || c.is_punct("_", 1)) &&
      c.is_punct(")", 2)) {
    c.next();
    if (c.accept_punct("_")) {
      slot.kind = PatSlot::Kind::DontCare;
    } else {
      slot.kind = PatSlot::Kind::Binder;
      slot.name = c.expect_ident("binder");
      if (is_keyword(slot.name)) c.fail("'" + slot.name + "' is reserved");
    }
    c.expect_punct(")");
    return slot;
  }
  slot.kind = PatSlot::Kind::Expr;
  slot.expr = parse_expr(c, scope);
  return slot;
}

namespace {

PatPart slot_to_literal_part(Cursor& c, const PatSlot& slot, bool port_position) {
  switch (slot.kind) {
    case PatSlot::Kind::Binder:
      return PatPart::binder(slot.name);
    case PatSlot::Kind::DontCare:
      return PatPart::dont_care();
    case PatSlot::Kind::Expr: {
      if (slot.expr->kind == Expr::Kind::Var) return PatPart::var(slot.expr->name);
      std::set<std::string> fv;
      free_vars_expr(slot.expr, fv);
      if (!fv.empty())
        c.fail("pattern slot must be a binder, '_', a literal, or a bound variable");
      Value v = eval_expr(slot.expr, {});
      if (port_position && v.kind() != Value::Kind::Atom)
        c.fail("port position needs an identifier");
      return PatPart::lit_value(std::move(v));
    }
  }
  return PatPart::dont_care();
}

}  // namespace

Pattern parse_pattern_literal(Cursor& c, const Scope& scope) {
  Pattern p;
  PatSlot port = parse_pat_slot(c, scope);
  if (c.accept_punct("?"))
    p.dir = Direction::In;
  else if (c.accept_punct("!"))
    p.dir = Direction::Out;
  else
    c.fail("expected '?' or '!' in pattern");
  PatSlot payload = parse_pat_slot(c, scope);
  p.port = slot_to_literal_part(c, port, true);
  p.payload = slot_to_literal_part(c, payload, false);
  if (p.port.kind == PatPart::Kind::Binder && p.payload.kind == PatPart::Kind::Binder &&
      p.port.name == p.payload.name)
    c.fail("pattern binders must be pairwise distinct");
  return p;
}

Action parse_closed_action(Cursor& c) {
  std::string port = c.expect_ident("a port name");
  if (is_keyword(port)) c.fail("'" + port + "' is reserved");
  Direction dir;
  if (c.accept_punct("?"))
    dir = Direction::In;
  else if (c.accept_punct("!"))
    dir = Direction::Out;
  else
    c.fail("expected '?' or '!'");
  ExprPtr payload = parse_expr(c, Scope{});
  return Action{dir, std::move(port), eval_expr(payload, {})};
}

std::string fresh_name(const std::string& stem, const std::set<std::string>& used) {
  if (!used.count(stem) && !is_keyword(stem)) return stem;
  for (int i = 0;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!used.count(candidate) && !is_keyword(candidate)) return candidate;
  }
}

std::set<std::string> identifiers_of(const std::vector<Token>& tokens) {
  std::set<std::string> out;
  for (const auto& t : tokens)
    if (t.kind == Token::Kind::Ident) out.insert(t.text);
  return out;
}

}  // namespace bienforce::detail
