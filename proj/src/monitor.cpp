#include "bienforce/monitor.hpp"

#include <algorithm>
#include <map>

#include "bienforce/errors.hpp"
#include "parse_common.hpp"

namespace bienforce {

TransformAction TransformAction::dot() {
  TransformAction t;
  t.kind = Kind::Dot;
  return t;
}

TransformAction TransformAction::replay() {
  TransformAction t;
  t.kind = Kind::Replay;
  return t;
}

TransformAction TransformAction::action_template(Direction dir, PatPart port,
                                                 ExprPtr payload) {
  TransformAction t;
  t.kind = Kind::Template;
  t.dir = dir;
  t.port = std::move(port);
  t.payload = std::move(payload);
  return t;
}

namespace {

std::shared_ptr<Transducer> node(Transducer::Kind kind) {
  auto e = std::make_shared<Transducer>();
  e->kind = kind;
  return e;
}

void check_prefix_shape(bool pat_is_dot, const Pattern& pat, const TransformAction& tact) {
  if (pat_is_dot && tact.kind == TransformAction::Kind::Dot)
    throw Error("BothDot", "pattern and transformation action cannot both be '.'");
  if (pat_is_dot && tact.kind == TransformAction::Kind::Replay)
    throw Error("BothDot", "an insertion prefix needs an explicit action");
  if (!pat_is_dot && tact.kind == TransformAction::Kind::Template &&
      tact.dir != pat.dir)
    throw Error("DirectionMismatch",
                "pattern and transformation action have different directions");
}

}  // namespace

TrnPtr t_prefix(Pattern pat, CondPtr cond, TransformAction tact, TrnPtr cont) {
  check_prefix_shape(false, pat, tact);
  auto e = node(Transducer::Kind::Prefix);
  e->pat = std::move(pat);
  e->cond = std::move(cond);
  e->tact = std::move(tact);
  e->cont = std::move(cont);
  return e;
}

TrnPtr t_insertion(CondPtr cond, TransformAction tact, TrnPtr cont) {
  check_prefix_shape(true, Pattern{}, tact);
  auto e = node(Transducer::Kind::Prefix);
  e->pat_is_dot = true;
  e->cond = std::move(cond);
  e->tact = std::move(tact);
  e->cont = std::move(cont);
  return e;
}

TrnPtr t_sum(std::vector<TrnPtr> branches) {
  if (branches.empty()) throw Error("SyntaxError", "empty summation");
  if (branches.size() == 1) return branches[0];
  std::vector<TrnPtr> flat;
  for (auto& b : branches) {
    if (b->kind == Transducer::Kind::Sum)
      flat.insert(flat.end(), b->branches.begin(), b->branches.end());
    else
      flat.push_back(std::move(b));
  }
  auto e = node(Transducer::Kind::Sum);
  e->branches = std::move(flat);
  return e;
}

TrnPtr t_rec(std::string var, TrnPtr body) {
  auto e = node(Transducer::Kind::Rec);
  e->var = std::move(var);
  e->body = std::move(body);
  return e;
}

TrnPtr t_tvar(std::string var) {
  auto e = node(Transducer::Kind::TVar);
  e->var = std::move(var);
  return e;
}

TrnPtr identity_monitor() {
  static const TrnPtr id = [] {
    Pattern pin{Direction::In, PatPart::binder("x"), PatPart::binder("z")};
    Pattern pout{Direction::Out, PatPart::binder("x"), PatPart::binder("z")};
    TransformAction tin = TransformAction::action_template(
        Direction::In, PatPart::var("x"), expr_var("z"));
    TransformAction tout = TransformAction::action_template(
        Direction::Out, PatPart::var("x"), expr_var("z"));
    return t_rec("y", t_sum({t_prefix(pin, cond_true(), tin, t_tvar("y")),
                             t_prefix(pout, cond_true(), tout, t_tvar("y"))}));
  }();
  return id;
}

bool is_identity_term(const TrnPtr& e) {
  if (e == identity_monitor()) return true;
  return monitor_alpha_key(e) == monitor_alpha_key(identity_monitor());
}

// ----------------------------------------------------------------- printing

namespace {

std::string template_str(const TransformAction& t) {
  std::string port = t.port.kind == PatPart::Kind::Lit ? t.port.lit.str() : t.port.name;
  return port + direction_mark(t.dir) + expr_str(t.payload);
}

bool trn_tail_swallows(const TrnPtr& e) {
  if (is_identity_term(e)) return false;  // printed as the atom `id`
  switch (e->kind) {
    case Transducer::Kind::Rec:
      return true;
    case Transducer::Kind::Prefix:
      return trn_tail_swallows(e->cont);
    default:
      return false;
  }
}

std::string print_trn(const TrnPtr& e) {
  if (is_identity_term(e)) return "id";
  auto wrap_sum = [](const TrnPtr& m) {
    std::string s = print_trn(m);
    return m->kind == Transducer::Kind::Sum ? "(" + s + ")" : s;
  };
  auto wrap_operand = [&](const TrnPtr& m) {
    std::string s = print_trn(m);
    return m->kind == Transducer::Kind::Sum || trn_tail_swallows(m) ? "(" + s + ")" : s;
  };
  switch (e->kind) {
    case Transducer::Kind::Prefix: {
      std::string head = e->pat_is_dot ? "." : e->pat.str();
      if (!cond_is_true(e->cond)) head += ", " + cond_str(e->cond);
      switch (e->tact.kind) {
        case TransformAction::Kind::Dot:
          head += ", .";
          break;
        case TransformAction::Kind::Replay:
          break;
        case TransformAction::Kind::Template:
          head += ", " + template_str(e->tact);
          break;
      }
      return "(" + head + "). " + wrap_sum(e->cont);
    }
    case Transducer::Kind::Sum: {
      std::string out;
      for (std::size_t i = 0; i < e->branches.size(); ++i) {
        if (i) out += " + ";
        out += i + 1 < e->branches.size() ? wrap_operand(e->branches[i])
                                          : print_trn(e->branches[i]);
      }
      return out;
    }
    case Transducer::Kind::Rec:
      return "rec " + e->var + ". " + wrap_sum(e->body);
    case Transducer::Kind::TVar:
      return e->var;
  }
  return {};
}

// Canonical key contexts: recursion binders numbered by binding depth, data
// binders by binding order along the path, so alpha-equivalent monitors get
// equal keys.
struct AlphaCtx {
  std::map<std::string, int> rec_depth;
  std::map<std::string, std::string> data;
  int rec_count = 0;
  int data_count = 0;
};

std::string alpha_name(const AlphaCtx& ctx, const std::string& name) {
  auto it = ctx.data.find(name);
  return it == ctx.data.end() ? name : it->second;
}

std::string alpha_expr(const ExprPtr& e, const AlphaCtx& ctx) {
  ExprPtr renamed = e;
  for (const auto& [from, to] : ctx.data) renamed = rename_expr_var(renamed, from, to);
  return expr_str(renamed);
}

std::string alpha_cond(const CondPtr& c, const AlphaCtx& ctx) {
  CondPtr renamed = c;
  for (const auto& [from, to] : ctx.data) renamed = rename_cond_var(renamed, from, to);
  return cond_str(renamed);
}

std::string alpha_part(const PatPart& p, const AlphaCtx& ctx) {
  switch (p.kind) {
    case PatPart::Kind::Binder:
      return "(" + alpha_name(ctx, p.name) + ")";
    case PatPart::Kind::DontCare:
      return "(_)";
    case PatPart::Kind::Lit:
      return p.lit.str();
    case PatPart::Kind::Var:
      return alpha_name(ctx, p.name);
  }
  return {};
}

std::string alpha_key(const TrnPtr& e, AlphaCtx ctx) {
  switch (e->kind) {
    case Transducer::Kind::Prefix: {
      std::string head;
      AlphaCtx inner = ctx;
      if (e->pat_is_dot) {
        head = ".";
      } else {
        // Canonical binder names are assigned in port-then-payload order;
        // the prefix character keeps them disjoint from user identifiers.
        for (const PatPart* part : {&e->pat.port, &e->pat.payload})
          if (part->kind == PatPart::Kind::Binder)
            inner.data[part->name] = "\x02" + std::to_string(inner.data_count++);
        head = alpha_part(e->pat.port, inner) + direction_mark(e->pat.dir) +
               alpha_part(e->pat.payload, inner);
      }
      head += "|" + alpha_cond(e->cond, inner) + "|";
      switch (e->tact.kind) {
        case TransformAction::Kind::Dot:
          head += ".";
          break;
        case TransformAction::Kind::Replay:
          head += "=";
          break;
        case TransformAction::Kind::Template:
          head += alpha_part(e->tact.port, inner) + direction_mark(e->tact.dir) +
                  alpha_expr(e->tact.payload, inner);
          break;
      }
      return "(" + head + ")." + alpha_key(e->cont, inner);
    }
    case Transducer::Kind::Sum: {
      std::vector<std::string> parts;
      parts.reserve(e->branches.size());
      for (const auto& b : e->branches) parts.push_back(alpha_key(b, ctx));
      std::sort(parts.begin(), parts.end());
      std::string out = "+{";
      for (const auto& p : parts) out += p + ";";
      return out + "}";
    }
    case Transducer::Kind::Rec: {
      AlphaCtx inner = ctx;
      inner.rec_depth[e->var] = inner.rec_count++;
      return "rec#" + alpha_key(e->body, inner);
    }
    case Transducer::Kind::TVar: {
      auto it = ctx.rec_depth.find(e->var);
      return it == ctx.rec_depth.end() ? "?" + e->var : "#" + std::to_string(it->second);
    }
  }
  return {};
}

}  // namespace

std::string monitor_str(const TrnPtr& e) { return print_trn(e); }

std::string monitor_alpha_key(const TrnPtr& e) { return alpha_key(e, AlphaCtx{}); }

// ------------------------------------------------------------- substitution

namespace {

PatPart subst_tact_port(const PatPart& p, const Substitution& s) {
  if (p.kind != PatPart::Kind::Var) return p;
  auto it = s.find(p.name);
  return it == s.end() ? p : PatPart::lit_value(it->second);
}

}  // namespace

TrnPtr subst_transducer(const TrnPtr& e, const Substitution& s) {
  if (s.empty()) return e;
  switch (e->kind) {
    case Transducer::Kind::TVar:
      return e;
    case Transducer::Kind::Rec: {
      TrnPtr body = subst_transducer(e->body, s);
      return body == e->body ? e : t_rec(e->var, body);
    }
    case Transducer::Kind::Sum: {
      std::vector<TrnPtr> branches;
      branches.reserve(e->branches.size());
      bool changed = false;
      for (const auto& b : e->branches) {
        branches.push_back(subst_transducer(b, s));
        changed = changed || branches.back() != b;
      }
      return changed ? t_sum(std::move(branches)) : e;
    }
    case Transducer::Kind::Prefix: {
      Substitution inner = s;
      if (!e->pat_is_dot)
        for (const auto& v : bound_vars(e->pat)) inner.erase(v);
      Pattern pat = e->pat_is_dot ? e->pat : subst_pattern(e->pat, s);
      CondPtr cond = subst_cond(e->cond, inner);
      TransformAction tact = e->tact;
      if (tact.kind == TransformAction::Kind::Template) {
        tact.port = subst_tact_port(tact.port, inner);
        tact.payload = subst_expr(tact.payload, inner);
      }
      TrnPtr cont = subst_transducer(e->cont, inner);
      auto out = node(Transducer::Kind::Prefix);
      out->pat_is_dot = e->pat_is_dot;
      out->pat = std::move(pat);
      out->cond = std::move(cond);
      out->tact = std::move(tact);
      out->cont = std::move(cont);
      return out;
    }
  }
  return e;
}

// ------------------------------------------------------------------ parsing

namespace {

using detail::Cursor;
using detail::Scope;

struct MonitorParser {
  Cursor& c;
  const std::vector<detail::Token>& tokens;

  TrnPtr parse_sum(Scope scope, std::set<std::string> recvars) {
    std::vector<TrnPtr> branches;
    branches.push_back(parse_prefix_term(scope, recvars));
    while (c.accept_punct("+")) branches.push_back(parse_prefix_term(scope, recvars));
    return t_sum(std::move(branches));
  }

  TrnPtr parse_prefix_term(Scope scope, std::set<std::string> recvars) {
    if (c.accept_ident("id")) return identity_monitor();
    if (c.accept_ident("rec")) {
      // rec scopes over the whole summation to its right.
      std::string var = c.expect_ident("recursion variable");
      c.expect_punct(".");
      recvars.insert(var);
      return t_rec(var, parse_sum(scope, recvars));
    }
    if (c.is_punct("(")) {
      std::size_t close = detail::matching_bracket(tokens, c.position());
      bool is_prefix = close + 1 < tokens.size() &&
                       tokens[close + 1].kind == detail::Token::Kind::Punct &&
                       tokens[close + 1].text == ".";
      if (!is_prefix) {
        c.next();
        TrnPtr inner = parse_sum(scope, recvars);
        c.expect_punct(")");
        return inner;
      }
      return parse_prefix(scope, recvars);
    }
    const auto& t = c.peek();
    if (t.kind == detail::Token::Kind::Ident && !detail::is_keyword(t.text)) {
      std::string name = c.next().text;
      if (!recvars.count(name))
        c.fail("unbound recursion variable '" + name + "'", "OpenTerm");
      return t_tvar(name);
    }
    c.fail("expected a monitor term");
  }

  // (TPAT [, C] [, TACT]). M  — with TACT mandatory when TPAT is '.'.
  TrnPtr parse_prefix(Scope scope, const std::set<std::string>& recvars) {
    c.expect_punct("(");
    bool pat_dot = false;
    Pattern pat;
    if (c.is_punct(".")) {
      c.next();
      pat_dot = true;
    } else {
      pat = detail::parse_pattern_literal(c, scope);
    }
    Scope inner = pat_dot ? scope : scope.with(bound_vars(pat));
    CondPtr cond = cond_true();
    TransformAction tact = TransformAction::replay();
    bool have_tact = false;
    if (c.accept_punct(",")) {
      auto parsed = try_parse_tact(inner);
      if (parsed) {
        tact = *parsed;
        have_tact = true;
      } else {
        cond = detail::parse_condition(c, inner);
        if (c.accept_punct(",")) {
          auto second = try_parse_tact(inner);
          if (!second) c.fail("expected a transformation action");
          tact = *second;
          have_tact = true;
        }
      }
    }
    if (pat_dot && !have_tact)
      c.fail("an insertion prefix needs a transformation action", "BothDot");
    c.expect_punct(")");
    c.expect_punct(".");
    TrnPtr cont = parse_prefix_term(inner, recvars);
    try {
      return pat_dot ? t_insertion(cond, tact, cont)
                     : t_prefix(pat, cond, tact, cont);
    } catch (const Error& err) {
      c.fail(err.message(), err.code());
    }
  }

  std::optional<TransformAction> try_parse_tact(const Scope& scope) {
    std::size_t start = c.position();
    if (c.accept_punct(".")) {
      if (c.is_punct(")")) return TransformAction::dot();
      c.rewind(start);
      return std::nullopt;
    }
    const auto& t = c.peek();
    if (t.kind != detail::Token::Kind::Ident || detail::is_keyword(t.text)) {
      return std::nullopt;
    }
    std::string port_name = c.next().text;
    Direction dir;
    if (c.accept_punct("?"))
      dir = Direction::In;
    else if (c.accept_punct("!"))
      dir = Direction::Out;
    else {
      c.rewind(start);
      return std::nullopt;
    }
    ExprPtr payload;
    try {
      payload = detail::parse_expr(c, scope);
    } catch (const ParseError&) {
      c.rewind(start);
      return std::nullopt;
    }
    if (!c.is_punct(")")) {
      c.rewind(start);
      return std::nullopt;
    }
    PatPart port = scope.bound(port_name) ? PatPart::var(port_name)
                                          : PatPart::lit_port(port_name);
    return TransformAction::action_template(dir, port, payload);
  }
};

void check_monitor_guarded(const TrnPtr& e, const std::string& var, bool guarded) {
  switch (e->kind) {
    case Transducer::Kind::Prefix:
      check_monitor_guarded(e->cont, var, true);
      return;
    case Transducer::Kind::Sum:
      for (const auto& b : e->branches) check_monitor_guarded(b, var, guarded);
      return;
    case Transducer::Kind::Rec:
      if (e->var == var) return;
      check_monitor_guarded(e->body, var, guarded);
      return;
    case Transducer::Kind::TVar:
      if (e->var == var && !guarded)
        throw ParseError("SyntaxError",
                         "recursion variable '" + var + "' is not guarded", 1, 1);
      return;
  }
}

void check_monitor_all_guarded(const TrnPtr& e) {
  switch (e->kind) {
    case Transducer::Kind::Prefix:
      check_monitor_all_guarded(e->cont);
      return;
    case Transducer::Kind::Sum:
      for (const auto& b : e->branches) check_monitor_all_guarded(b);
      return;
    case Transducer::Kind::Rec:
      check_monitor_guarded(e->body, e->var, false);
      check_monitor_all_guarded(e->body);
      return;
    case Transducer::Kind::TVar:
      return;
  }
}

}  // namespace

TrnPtr parse_monitor(const std::string& text) {
  auto tokens = detail::tokenize(text);
  Cursor c(tokens);
  MonitorParser parser{c, tokens};
  TrnPtr e = parser.parse_sum(Scope{}, {});
  if (!c.at_end()) c.fail("trailing input after monitor");
  check_monitor_all_guarded(e);
  return e;
}

// ------------------------------------------------------------------ dynamics

namespace {

TrnPtr unfold_rec_trn(const TrnPtr& body, const std::string& var, const TrnPtr& rec_term) {
  switch (body->kind) {
    case Transducer::Kind::TVar:
      return body->var == var ? rec_term : body;
    case Transducer::Kind::Rec:
      if (body->var == var) return body;
      return t_rec(body->var, unfold_rec_trn(body->body, var, rec_term));
    case Transducer::Kind::Sum: {
      std::vector<TrnPtr> bs;
      bs.reserve(body->branches.size());
      for (const auto& b : body->branches) bs.push_back(unfold_rec_trn(b, var, rec_term));
      return t_sum(std::move(bs));
    }
    case Transducer::Kind::Prefix: {
      auto out = node(Transducer::Kind::Prefix);
      out->pat_is_dot = body->pat_is_dot;
      out->pat = body->pat;
      out->cond = body->cond;
      out->tact = body->tact;
      out->cont = unfold_rec_trn(body->cont, var, rec_term);
      return out;
    }
  }
  return body;
}

}  // namespace

TrnPtr unfold_rec(const TrnPtr& e) {
  if (e->kind != Transducer::Kind::Rec) return e;
  return unfold_rec_trn(e->body, e->var, e);
}

namespace {

void head_prefixes(const TrnPtr& e, std::vector<TrnPtr>& out) {
  switch (e->kind) {
    case Transducer::Kind::Prefix:
      out.push_back(e);
      return;
    case Transducer::Kind::Sum:
      for (const auto& b : e->branches) head_prefixes(b, out);
      return;
    case Transducer::Kind::Rec:
      head_prefixes(unfold_rec_trn(e->body, e->var, e), out);
      return;
    case Transducer::Kind::TVar:
      throw EvalError("UnboundVariable",
                      "free recursion variable '" + e->var + "' at runtime");
  }
}

Action instantiate_template(const TransformAction& t, const Substitution& s) {
  std::string port;
  if (t.port.kind == PatPart::Kind::Lit) {
    port = t.port.lit.name();
  } else {
    auto it = s.find(t.port.name);
    if (it == s.end())
      throw EvalError("UnboundVariable",
                      "template port variable '" + t.port.name + "' is not bound");
    if (it->second.kind() != Value::Kind::Atom)
      throw EvalError("TypeMismatch", "template port is not a port name");
    port = it->second.name();
  }
  return Action{t.dir, std::move(port), eval_expr(t.payload, s)};
}

}  // namespace

std::vector<MonitorTransform> transforms_of(const TrnPtr& e, const Action& source) {
  std::vector<TrnPtr> prefixes;
  head_prefixes(e, prefixes);
  std::vector<MonitorTransform> out;
  for (const auto& p : prefixes) {
    if (p->pat_is_dot) continue;
    auto s = match_pattern(p->pat, source);
    if (!s || !eval_condition(p->cond, *s)) continue;
    MonitorTransform mt;
    mt.source = source;
    switch (p->tact.kind) {
      case TransformAction::Kind::Dot:
        break;  // suppression: no result action
      case TransformAction::Kind::Replay:
        mt.result = source;
        break;
      case TransformAction::Kind::Template:
        mt.result = instantiate_template(p->tact, *s);
        break;
    }
    mt.cont = subst_transducer(p->cont, *s);
    out.push_back(std::move(mt));
  }
  return out;
}

std::vector<MonitorTransform> insertions_of(const TrnPtr& e) {
  std::vector<TrnPtr> prefixes;
  head_prefixes(e, prefixes);
  std::vector<MonitorTransform> out;
  for (const auto& p : prefixes) {
    if (!p->pat_is_dot) continue;
    if (!eval_condition(p->cond, {})) continue;
    MonitorTransform mt;
    mt.result = instantiate_template(p->tact, {});
    mt.cont = p->cont;
    out.push_back(std::move(mt));
  }
  return out;
}

std::vector<MonitorTransform> monitor_labels(const TrnPtr& e, const Universe& universe) {
  std::vector<MonitorTransform> out = insertions_of(e);
  for (const auto& a : universe.action_set())
    for (auto& mt : transforms_of(e, a)) out.push_back(std::move(mt));
  return out;
}

// ---------------------------------------------------------------------- etp

std::string capability_str(Capability c) {
  switch (c) {
    case Capability::Dis:
      return "dis";
    case Capability::En:
      return "en";
    case Capability::Adpt:
      return "adpt";
  }
  return {};
}

namespace {

// Syntactic identity detection: the transformation action replays the
// pattern's port/payload slots verbatim.
bool is_identity_prefix(const Transducer& p) {
  if (p.pat_is_dot) return false;
  if (p.tact.kind == TransformAction::Kind::Replay) return true;
  if (p.tact.kind != TransformAction::Kind::Template) return false;
  if (p.tact.dir != p.pat.dir) return false;
  const PatPart& pp = p.pat.port;
  const PatPart& tp = p.tact.port;
  bool port_ok = (pp.kind == PatPart::Kind::Binder && tp.kind == PatPart::Kind::Var &&
                  pp.name == tp.name) ||
                 (pp.kind == PatPart::Kind::Lit && tp.kind == PatPart::Kind::Lit &&
                  pp.lit == tp.lit) ||
                 (pp.kind == PatPart::Kind::Var && tp.kind == PatPart::Kind::Var &&
                  pp.name == tp.name);
  if (!port_ok) return false;
  const PatPart& pl = p.pat.payload;
  const ExprPtr& te = p.tact.payload;
  if (pl.kind == PatPart::Kind::Binder)
    return te->kind == Expr::Kind::Var && te->name == pl.name;
  if (pl.kind == PatPart::Kind::Lit)
    return te->kind == Expr::Kind::Const && te->value == pl.lit;
  if (pl.kind == PatPart::Kind::Var)
    return te->kind == Expr::Kind::Var && te->name == pl.name;
  return false;
}

void etp_walk(const TrnPtr& e, std::set<Capability>& out,
              std::set<const Transducer*>& seen) {
  if (!seen.insert(e.get()).second) return;
  switch (e->kind) {
    case Transducer::Kind::TVar:
      return;
    case Transducer::Kind::Sum:
      for (const auto& b : e->branches) etp_walk(b, out, seen);
      return;
    case Transducer::Kind::Rec:
      etp_walk(e->body, out, seen);
      return;
    case Transducer::Kind::Prefix:
      if (e->pat_is_dot) {
        out.insert(e->tact.dir == Direction::In ? Capability::Dis : Capability::En);
      } else if (e->tact.kind == TransformAction::Kind::Dot) {
        out.insert(e->pat.dir == Direction::Out ? Capability::Dis : Capability::En);
      } else if (!is_identity_prefix(*e)) {
        out.insert(Capability::Adpt);
      }
      etp_walk(e->cont, out, seen);
      return;
  }
}

}  // namespace

std::set<Capability> etp(const TrnPtr& e) {
  std::set<Capability> out;
  std::set<const Transducer*> seen;
  etp_walk(e, out, seen);
  return out;
}

}  // namespace bienforce
