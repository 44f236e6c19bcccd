#include "bienforce/core.hpp"

#include <algorithm>

#include "bienforce/errors.hpp"
#include "parse_common.hpp"

namespace bienforce {

// -------------------------------------------------------------- expressions

ExprPtr expr_var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  return e;
}

ExprPtr expr_const(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Const;
  e->value = std::move(v);
  return e;
}

ExprPtr expr_cons(std::string name, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Cons;
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

ExprPtr expr_tuple(std::vector<ExprPtr> items) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Tuple;
  e->args = std::move(items);
  return e;
}

CondPtr cond_true() {
  static const CondPtr t = [] {
    auto c = std::make_shared<Condition>();
    c->kind = Condition::Kind::Lit;
    c->lit = true;
    return c;
  }();
  return t;
}

CondPtr cond_false() {
  static const CondPtr f = [] {
    auto c = std::make_shared<Condition>();
    c->kind = Condition::Kind::Lit;
    c->lit = false;
    return c;
  }();
  return f;
}

CondPtr cond_cmp(CmpOp op, ExprPtr l, ExprPtr r) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::Cmp;
  c->op = op;
  c->lhs = std::move(l);
  c->rhs = std::move(r);
  return c;
}

CondPtr cond_and(CondPtr a, CondPtr b) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::And;
  c->a = std::move(a);
  c->b = std::move(b);
  return c;
}

CondPtr cond_or(CondPtr a, CondPtr b) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::Or;
  c->a = std::move(a);
  c->b = std::move(b);
  return c;
}

CondPtr cond_not(CondPtr a) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::Not;
  c->a = std::move(a);
  return c;
}

bool cond_is_true(const CondPtr& c) {
  return c->kind == Condition::Kind::Lit && c->lit;
}

std::string expr_str(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return e->name;
    case Expr::Kind::Const:
      return e->value.str();
    case Expr::Kind::Cons: {
      std::string out = e->name + "(";
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (i) out += ", ";
        out += expr_str(e->args[i]);
      }
      return out + ")";
    }
    case Expr::Kind::Tuple: {
      std::string out = "<";
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (i) out += ", ";
        out += expr_str(e->args[i]);
      }
      return out + ">";
    }
  }
  return {};
}

namespace {

const char* cmp_str(CmpOp op) {
  switch (op) {
    case CmpOp::Eq:
      return "=";
    case CmpOp::Neq:
      return "!=";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Ge:
      return ">=";
    case CmpOp::Lt:
      return "<";
    case CmpOp::Gt:
      return ">";
  }
  return "?";
}

// Precedence: Not > And > Or. Lit/Cmp are atoms.
std::string cond_str_prec(const CondPtr& c, int parent) {
  switch (c->kind) {
    case Condition::Kind::Lit:
      return c->lit ? "true" : "false";
    case Condition::Kind::Cmp:
      return expr_str(c->lhs) + " " + cmp_str(c->op) + " " + expr_str(c->rhs);
    case Condition::Kind::Not: {
      std::string inner = cond_str_prec(c->a, 3);
      if (c->a->kind == Condition::Kind::Cmp || c->a->kind == Condition::Kind::And ||
          c->a->kind == Condition::Kind::Or)
        inner = "(" + inner + ")";
      return "!" + inner;
    }
    case Condition::Kind::And: {
      std::string s = cond_str_prec(c->a, 2) + " && " + cond_str_prec(c->b, 2);
      return parent > 2 ? "(" + s + ")" : s;
    }
    case Condition::Kind::Or: {
      std::string s = cond_str_prec(c->a, 1) + " || " + cond_str_prec(c->b, 1);
      return parent > 1 ? "(" + s + ")" : s;
    }
  }
  return {};
}

}  // namespace

std::string cond_str(const CondPtr& c) { return cond_str_prec(c, 0); }

ExprPtr subst_expr(const ExprPtr& e, const Substitution& s) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = s.find(e->name);
      return it == s.end() ? e : expr_const(it->second);
    }
    case Expr::Kind::Const:
      return e;
    case Expr::Kind::Cons:
    case Expr::Kind::Tuple: {
      std::vector<ExprPtr> args;
      args.reserve(e->args.size());
      bool changed = false;
      for (const auto& a : e->args) {
        args.push_back(subst_expr(a, s));
        changed = changed || args.back() != a;
      }
      if (!changed) return e;
      return e->kind == Expr::Kind::Cons ? expr_cons(e->name, std::move(args))
                                         : expr_tuple(std::move(args));
    }
  }
  return e;
}

CondPtr subst_cond(const CondPtr& c, const Substitution& s) {
  switch (c->kind) {
    case Condition::Kind::Lit:
      return c;
    case Condition::Kind::Cmp:
      return cond_cmp(c->op, subst_expr(c->lhs, s), subst_expr(c->rhs, s));
    case Condition::Kind::And:
      return cond_and(subst_cond(c->a, s), subst_cond(c->b, s));
    case Condition::Kind::Or:
      return cond_or(subst_cond(c->a, s), subst_cond(c->b, s));
    case Condition::Kind::Not:
      return cond_not(subst_cond(c->a, s));
  }
  return c;
}

ExprPtr rename_expr_var(const ExprPtr& e, const std::string& from, const std::string& to) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return e->name == from ? expr_var(to) : e;
    case Expr::Kind::Const:
      return e;
    case Expr::Kind::Cons:
    case Expr::Kind::Tuple: {
      std::vector<ExprPtr> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) args.push_back(rename_expr_var(a, from, to));
      return e->kind == Expr::Kind::Cons ? expr_cons(e->name, std::move(args))
                                         : expr_tuple(std::move(args));
    }
  }
  return e;
}

CondPtr rename_cond_var(const CondPtr& c, const std::string& from, const std::string& to) {
  switch (c->kind) {
    case Condition::Kind::Lit:
      return c;
    case Condition::Kind::Cmp:
      return cond_cmp(c->op, rename_expr_var(c->lhs, from, to),
                      rename_expr_var(c->rhs, from, to));
    case Condition::Kind::And:
      return cond_and(rename_cond_var(c->a, from, to), rename_cond_var(c->b, from, to));
    case Condition::Kind::Or:
      return cond_or(rename_cond_var(c->a, from, to), rename_cond_var(c->b, from, to));
    case Condition::Kind::Not:
      return cond_not(rename_cond_var(c->a, from, to));
  }
  return c;
}

void free_vars_expr(const ExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case Expr::Kind::Var:
      out.insert(e->name);
      return;
    case Expr::Kind::Const:
      return;
    case Expr::Kind::Cons:
    case Expr::Kind::Tuple:
      for (const auto& a : e->args) free_vars_expr(a, out);
      return;
  }
}

void free_vars_cond(const CondPtr& c, std::set<std::string>& out) {
  switch (c->kind) {
    case Condition::Kind::Lit:
      return;
    case Condition::Kind::Cmp:
      free_vars_expr(c->lhs, out);
      free_vars_expr(c->rhs, out);
      return;
    case Condition::Kind::And:
    case Condition::Kind::Or:
      free_vars_cond(c->a, out);
      free_vars_cond(c->b, out);
      return;
    case Condition::Kind::Not:
      free_vars_cond(c->a, out);
      return;
  }
}

Value eval_expr(const ExprPtr& e, const Substitution& s) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = s.find(e->name);
      if (it == s.end())
        throw EvalError("UnboundVariable", "variable '" + e->name + "' is not bound");
      return it->second;
    }
    case Expr::Kind::Const:
      return e->value;
    case Expr::Kind::Cons: {
      std::vector<Value> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) args.push_back(eval_expr(a, s));
      return Value::cons(e->name, std::move(args));
    }
    case Expr::Kind::Tuple: {
      std::vector<Value> items;
      items.reserve(e->args.size());
      for (const auto& a : e->args) items.push_back(eval_expr(a, s));
      return Value::tuple(std::move(items));
    }
  }
  throw EvalError("UnboundVariable", "malformed expression");
}

bool eval_condition(const CondPtr& c, const Substitution& s) {
  switch (c->kind) {
    case Condition::Kind::Lit:
      return c->lit;
    case Condition::Kind::Cmp: {
      Value l = eval_expr(c->lhs, s);
      Value r = eval_expr(c->rhs, s);
      switch (c->op) {
        case CmpOp::Eq:
          return l == r;
        case CmpOp::Neq:
          return l != r;
        default:
          break;
      }
      if (l.kind() != Value::Kind::Int || r.kind() != Value::Kind::Int)
        throw EvalError("TypeMismatch",
                        "ordering comparison on non-integer operands " + l.str() +
                            " and " + r.str());
      switch (c->op) {
        case CmpOp::Le:
          return l.num() <= r.num();
        case CmpOp::Ge:
          return l.num() >= r.num();
        case CmpOp::Lt:
          return l.num() < r.num();
        case CmpOp::Gt:
          return l.num() > r.num();
        default:
          return false;
      }
    }
    case Condition::Kind::And:
      return eval_condition(c->a, s) && eval_condition(c->b, s);
    case Condition::Kind::Or:
      return eval_condition(c->a, s) || eval_condition(c->b, s);
    case Condition::Kind::Not:
      return !eval_condition(c->a, s);
  }
  return false;
}

// ------------------------------------------------------------------ patterns

PatPart PatPart::binder(std::string n) {
  PatPart p;
  p.kind = Kind::Binder;
  p.name = std::move(n);
  return p;
}

PatPart PatPart::dont_care() {
  PatPart p;
  p.kind = Kind::DontCare;
  return p;
}

PatPart PatPart::lit_port(const std::string& port) { return lit_value(Value::atom(port)); }

PatPart PatPart::lit_value(Value v) {
  PatPart p;
  p.kind = Kind::Lit;
  p.lit = std::move(v);
  return p;
}

PatPart PatPart::var(std::string n) {
  PatPart p;
  p.kind = Kind::Var;
  p.name = std::move(n);
  return p;
}

bool PatPart::operator==(const PatPart& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Binder:
    case Kind::Var:
      return name == o.name;
    case Kind::DontCare:
      return true;
    case Kind::Lit:
      return lit == o.lit;
  }
  return false;
}

namespace {

std::string part_str(const PatPart& p) {
  switch (p.kind) {
    case PatPart::Kind::Binder:
      return "(" + p.name + ")";
    case PatPart::Kind::DontCare:
      return "(_)";
    case PatPart::Kind::Lit:
      return p.lit.str();
    case PatPart::Kind::Var:
      return p.name;
  }
  return {};
}

}  // namespace

std::string Pattern::str() const {
  return part_str(port) + direction_mark(dir) + part_str(payload);
}

std::set<std::string> bound_vars(const Pattern& p) {
  std::set<std::string> out;
  if (p.port.kind == PatPart::Kind::Binder) out.insert(p.port.name);
  if (p.payload.kind == PatPart::Kind::Binder) out.insert(p.payload.name);
  return out;
}

bool pattern_ground(const Pattern& p) {
  return p.port.kind != PatPart::Kind::Var && p.payload.kind != PatPart::Kind::Var;
}

namespace {

PatPart subst_part(const PatPart& p, const Substitution& s) {
  if (p.kind != PatPart::Kind::Var) return p;
  auto it = s.find(p.name);
  if (it == s.end()) return p;
  return PatPart::lit_value(it->second);
}

}  // namespace

Pattern subst_pattern(const Pattern& p, const Substitution& s) {
  Pattern out = p;
  out.port = subst_part(p.port, s);
  out.payload = subst_part(p.payload, s);
  return out;
}

std::optional<Substitution> match_pattern(const Pattern& pattern, const Action& action) {
  if (!pattern_ground(pattern))
    throw Error("OpenSymbolicAction",
                "pattern " + pattern.str() + " has unresolved variables");
  if (pattern.dir != action.dir) return std::nullopt;
  Substitution s;
  switch (pattern.port.kind) {
    case PatPart::Kind::Binder:
      s[pattern.port.name] = Value::atom(action.port);
      break;
    case PatPart::Kind::DontCare:
      break;
    case PatPart::Kind::Lit:
      if (pattern.port.lit != Value::atom(action.port)) return std::nullopt;
      break;
    case PatPart::Kind::Var:
      return std::nullopt;  // unreachable, guarded above
  }
  switch (pattern.payload.kind) {
    case PatPart::Kind::Binder:
      s[pattern.payload.name] = action.payload;
      break;
    case PatPart::Kind::DontCare:
      break;
    case PatPart::Kind::Lit:
      if (pattern.payload.lit != action.payload) return std::nullopt;
      break;
    case PatPart::Kind::Var:
      return std::nullopt;
  }
  return s;
}

// ------------------------------------------------------------------ universe

bool Universe::has_value(const Value& v) const {
  return std::find(values.begin(), values.end(), v) != values.end();
}

std::vector<Action> Universe::input_actions() const {
  std::vector<Action> out;
  out.reserve(ports.size() * values.size());
  for (const auto& p : ports)
    for (const auto& v : values) out.push_back(input(p, v));
  return out;
}

std::vector<Action> Universe::action_set() const {
  std::vector<Action> out = input_actions();
  for (const auto& p : ports)
    for (const auto& v : values) out.push_back(output(p, v));
  return out;
}

std::vector<Action> denotation(const Pattern& pattern, const CondPtr& cond,
                               const Universe& universe) {
  if (!pattern_ground(pattern))
    throw Error("OpenSymbolicAction",
                "pattern " + pattern.str() + " has unresolved variables");
  std::set<std::string> fv;
  free_vars_cond(cond, fv);
  for (const auto& b : bound_vars(pattern)) fv.erase(b);
  if (!fv.empty())
    throw Error("OpenSymbolicAction",
                "condition mentions '" + *fv.begin() + "' outside the pattern binders");
  std::vector<Action> out;
  for (const auto& a : universe.action_set()) {
    auto s = match_pattern(pattern, a);
    if (s && eval_condition(cond, *s)) out.push_back(a);
  }
  return out;
}

// -------------------------------------------------------------------- traces

ExplicitTrace parse_trace(const std::string& text) {
  detail::Cursor c(detail::tokenize(text));
  ExplicitTrace out;
  while (!c.at_end()) {
    if (c.accept_ident("tau")) {
      out.push_back(ExplicitAction::tau());
    } else {
      out.push_back(ExplicitAction::visible(detail::parse_closed_action(c)));
    }
    if (!c.at_end()) c.accept_punct(".");
  }
  return out;
}

Value parse_value(const std::string& text) {
  detail::Cursor c(detail::tokenize(text));
  ExprPtr e = detail::parse_expr(c, detail::Scope{});
  if (!c.at_end()) c.fail("trailing input after value");
  return eval_expr(e, {});
}

}  // namespace bienforce
