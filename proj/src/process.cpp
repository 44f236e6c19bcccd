#include "bienforce/process.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "bienforce/errors.hpp"
#include "parse_common.hpp"

namespace bienforce {

namespace {

std::shared_ptr<Process> node(Process::Kind kind) {
  auto p = std::make_shared<Process>();
  p->kind = kind;
  return p;
}

}  // namespace

ProcPtr proc_nil() {
  static const ProcPtr nil = node(Process::Kind::Nil);
  return nil;
}

ProcPtr proc_input(std::string port, std::string var, ProcPtr cont) {
  auto p = node(Process::Kind::Input);
  p->port = std::move(port);
  p->var = std::move(var);
  p->a = std::move(cont);
  return p;
}

ProcPtr proc_output(std::string port, ExprPtr payload, ProcPtr cont) {
  auto p = node(Process::Kind::Output);
  p->port = std::move(port);
  p->expr = std::move(payload);
  p->a = std::move(cont);
  return p;
}

ProcPtr proc_tau(ProcPtr cont) {
  auto p = node(Process::Kind::TauP);
  p->a = std::move(cont);
  return p;
}

ProcPtr proc_let(std::string var, ExprPtr expr, ProcPtr cont) {
  auto p = node(Process::Kind::Let);
  p->var = std::move(var);
  p->expr = std::move(expr);
  p->a = std::move(cont);
  return p;
}

ProcPtr proc_if(CondPtr cond, ProcPtr then_p, ProcPtr else_p) {
  auto p = node(Process::Kind::If);
  p->cond = std::move(cond);
  p->a = std::move(then_p);
  p->b = std::move(else_p);
  return p;
}

ProcPtr proc_choice(ProcPtr a, ProcPtr b) {
  auto p = node(Process::Kind::Choice);
  p->a = std::move(a);
  p->b = std::move(b);
  return p;
}

ProcPtr proc_rec(std::string var, ProcPtr body) {
  auto p = node(Process::Kind::Rec);
  p->var = std::move(var);
  p->a = std::move(body);
  return p;
}

ProcPtr proc_recvar(std::string var) {
  auto p = node(Process::Kind::RecVar);
  p->var = std::move(var);
  return p;
}

// ----------------------------------------------------------------- printing

namespace {

// True when an unparenthesized print of p would swallow a following `+ ...`
// (a rec at the tail extends over the whole summation to its right).
bool tail_swallows(const ProcPtr& p) {
  switch (p->kind) {
    case Process::Kind::Rec:
      return true;
    case Process::Kind::Input:
    case Process::Kind::Output:
    case Process::Kind::TauP:
    case Process::Kind::Let:
      return tail_swallows(p->a);
    case Process::Kind::If:
      return tail_swallows(p->b);
    default:
      return false;
  }
}

std::string print_proc(const ProcPtr& p) {
  auto wrap_choice = [](const ProcPtr& q) {
    std::string s = print_proc(q);
    return q->kind == Process::Kind::Choice ? "(" + s + ")" : s;
  };
  // Non-final summation operands also need parentheses around rec tails.
  auto wrap_operand = [&](const ProcPtr& q) {
    std::string s = print_proc(q);
    return q->kind == Process::Kind::Choice || tail_swallows(q) ? "(" + s + ")" : s;
  };
  switch (p->kind) {
    case Process::Kind::Nil:
      return "nil";
    case Process::Kind::Input:
      return p->port + "?(" + p->var + "). " + wrap_choice(p->a);
    case Process::Kind::Output:
      return p->port + "!" + expr_str(p->expr) + ". " + wrap_choice(p->a);
    case Process::Kind::TauP:
      return "tau. " + wrap_choice(p->a);
    case Process::Kind::Let:
      return "let " + p->var + " = " + expr_str(p->expr) + " in " + wrap_choice(p->a);
    case Process::Kind::If:
      return "if " + cond_str(p->cond) + " then " + wrap_choice(p->a) + " else " +
             wrap_choice(p->b);
    case Process::Kind::Choice:
      return wrap_operand(p->a) + " + " + print_proc(p->b);
    case Process::Kind::Rec:
      return "rec " + p->var + ". " + wrap_choice(p->a);
    case Process::Kind::RecVar:
      return p->var;
  }
  return {};
}

}  // namespace

std::string process_str(const ProcPtr& p) { return print_proc(p); }

// ------------------------------------------------------------------ parsing

namespace {

using detail::Cursor;
using detail::Scope;

ProcPtr parse_choice(Cursor& c, Scope scope, std::set<std::string> recvars);

ProcPtr parse_prefix_term(Cursor& c, Scope scope, std::set<std::string> recvars) {
  if (c.accept_ident("nil")) return proc_nil();
  if (c.accept_punct("(")) {
    ProcPtr inner = parse_choice(c, scope, recvars);
    c.expect_punct(")");
    return inner;
  }
  if (c.accept_ident("tau")) {
    c.expect_punct(".");
    return proc_tau(parse_prefix_term(c, scope, recvars));
  }
  if (c.accept_ident("rec")) {
    // rec scopes over the whole summation to its right.
    std::string var = c.expect_ident("recursion variable");
    c.expect_punct(".");
    recvars.insert(var);
    return proc_rec(var, parse_choice(c, scope, recvars));
  }
  if (c.accept_ident("let")) {
    std::string var = c.expect_ident("binder");
    c.expect_punct("=");
    ExprPtr e = detail::parse_expr(c, scope);
    if (!c.accept_ident("in")) c.fail("expected 'in'");
    return proc_let(var, e, parse_prefix_term(c, scope.with(var), recvars));
  }
  if (c.accept_ident("if")) {
    CondPtr cond = detail::parse_condition(c, scope);
    if (!c.accept_ident("then")) c.fail("expected 'then'");
    ProcPtr then_p = parse_prefix_term(c, scope, recvars);
    if (!c.accept_ident("else")) c.fail("expected 'else'");
    ProcPtr else_p = parse_prefix_term(c, scope, recvars);
    return proc_if(cond, then_p, else_p);
  }
  const auto& t = c.peek();
  if (t.kind != detail::Token::Kind::Ident) c.fail("expected a process term");
  if (detail::is_keyword(t.text)) c.fail("'" + t.text + "' is reserved");
  std::string name = c.next().text;
  if (c.accept_punct("?")) {
    c.expect_punct("(");
    std::string var = c.accept_punct("_") ? "_" : c.expect_ident("binder");
    c.expect_punct(")");
    c.expect_punct(".");
    return proc_input(name, var, parse_prefix_term(c, scope.with(var), recvars));
  }
  if (c.accept_punct("!")) {
    ExprPtr e = detail::parse_expr(c, scope);
    c.expect_punct(".");
    return proc_output(name, e, parse_prefix_term(c, scope, recvars));
  }
  if (!recvars.count(name))
    c.fail("unbound recursion variable '" + name + "'", "FreeVariable");
  return proc_recvar(name);
}

ProcPtr parse_choice(Cursor& c, Scope scope, std::set<std::string> recvars) {
  ProcPtr lhs = parse_prefix_term(c, scope, recvars);
  if (c.accept_punct("+")) return proc_choice(lhs, parse_choice(c, scope, recvars));
  return lhs;
}

void check_guarded(const ProcPtr& p, const std::string& var, bool guarded) {
  switch (p->kind) {
    case Process::Kind::Nil:
      return;
    case Process::Kind::Input:
    case Process::Kind::Output:
    case Process::Kind::TauP:
      check_guarded(p->a, var, true);
      return;
    case Process::Kind::Let:
      check_guarded(p->a, var, guarded);
      return;
    case Process::Kind::If:
      check_guarded(p->a, var, guarded);
      check_guarded(p->b, var, guarded);
      return;
    case Process::Kind::Choice:
      check_guarded(p->a, var, guarded);
      check_guarded(p->b, var, guarded);
      return;
    case Process::Kind::Rec:
      if (p->var == var) return;  // shadowed
      check_guarded(p->a, var, guarded);
      return;
    case Process::Kind::RecVar:
      if (p->var == var && !guarded)
        throw ParseError("UnguardedRecursion",
                         "recursion variable '" + var + "' is not action-guarded", 1, 1);
      return;
  }
}

void check_all_guarded(const ProcPtr& p) {
  switch (p->kind) {
    case Process::Kind::Rec:
      check_guarded(p->a, p->var, false);
      check_all_guarded(p->a);
      return;
    case Process::Kind::Nil:
    case Process::Kind::RecVar:
      return;
    case Process::Kind::If:
    case Process::Kind::Choice:
      check_all_guarded(p->a);
      check_all_guarded(p->b);
      return;
    default:
      check_all_guarded(p->a);
      return;
  }
}

}  // namespace

ProcPtr parse_process(const std::string& text) {
  Cursor c(detail::tokenize(text));
  ProcPtr p = parse_choice(c, Scope{}, {});
  if (!c.at_end()) c.fail("trailing input after process");
  check_all_guarded(p);
  return p;
}

// ------------------------------------------------------------- substitution

ProcPtr subst_process(const ProcPtr& p, const Substitution& s) {
  if (s.empty()) return p;
  switch (p->kind) {
    case Process::Kind::Nil:
    case Process::Kind::RecVar:
      return p;
    case Process::Kind::Input: {
      Substitution inner = s;
      inner.erase(p->var);
      return proc_input(p->port, p->var, subst_process(p->a, inner));
    }
    case Process::Kind::Output:
      return proc_output(p->port, subst_expr(p->expr, s), subst_process(p->a, s));
    case Process::Kind::TauP:
      return proc_tau(subst_process(p->a, s));
    case Process::Kind::Let: {
      Substitution inner = s;
      inner.erase(p->var);
      return proc_let(p->var, subst_expr(p->expr, s), subst_process(p->a, inner));
    }
    case Process::Kind::If:
      return proc_if(subst_cond(p->cond, s), subst_process(p->a, s),
                     subst_process(p->b, s));
    case Process::Kind::Choice:
      return proc_choice(subst_process(p->a, s), subst_process(p->b, s));
    case Process::Kind::Rec:
      return proc_rec(p->var, subst_process(p->a, s));
  }
  return p;
}

namespace {

ProcPtr unfold_rec(const ProcPtr& body, const std::string& var, const ProcPtr& rec_term) {
  switch (body->kind) {
    case Process::Kind::Nil:
      return body;
    case Process::Kind::RecVar:
      return body->var == var ? rec_term : body;
    case Process::Kind::Input:
      return proc_input(body->port, body->var, unfold_rec(body->a, var, rec_term));
    case Process::Kind::Output:
      return proc_output(body->port, body->expr, unfold_rec(body->a, var, rec_term));
    case Process::Kind::TauP:
      return proc_tau(unfold_rec(body->a, var, rec_term));
    case Process::Kind::Let:
      return proc_let(body->var, body->expr, unfold_rec(body->a, var, rec_term));
    case Process::Kind::If:
      return proc_if(body->cond, unfold_rec(body->a, var, rec_term),
                     unfold_rec(body->b, var, rec_term));
    case Process::Kind::Choice:
      return proc_choice(unfold_rec(body->a, var, rec_term),
                         unfold_rec(body->b, var, rec_term));
    case Process::Kind::Rec:
      if (body->var == var) return body;  // shadowed
      return proc_rec(body->var, unfold_rec(body->a, var, rec_term));
  }
  return body;
}

// Conditionals pick their branch without emitting a transition.
ProcPtr resolve_head(ProcPtr p) {
  while (p->kind == Process::Kind::If)
    p = eval_condition(p->cond, {}) ? p->a : p->b;
  return p;
}

void collect_steps(const ProcPtr& p, const Universe& universe,
                   std::vector<std::pair<ExplicitAction, ProcPtr>>& out) {
  switch (p->kind) {
    case Process::Kind::Nil:
      return;
    case Process::Kind::Input:
      for (const auto& v : universe.values) {
        Substitution s;
        if (p->var != "_") s[p->var] = v;
        out.emplace_back(ExplicitAction::visible(input(p->port, v)),
                         resolve_head(subst_process(p->a, s)));
      }
      return;
    case Process::Kind::Output:
      out.emplace_back(ExplicitAction::visible(output(p->port, eval_expr(p->expr, {}))),
                       resolve_head(p->a));
      return;
    case Process::Kind::TauP:
      out.emplace_back(ExplicitAction::tau(), resolve_head(p->a));
      return;
    case Process::Kind::Let: {
      Substitution s;
      s[p->var] = eval_expr(p->expr, {});
      out.emplace_back(ExplicitAction::tau(), resolve_head(subst_process(p->a, s)));
      return;
    }
    case Process::Kind::If:
      collect_steps(resolve_head(p), universe, out);
      return;
    case Process::Kind::Choice:
      collect_steps(p->a, universe, out);
      collect_steps(p->b, universe, out);
      return;
    case Process::Kind::Rec:
      collect_steps(unfold_rec(p->a, p->var, p), universe, out);
      return;
    case Process::Kind::RecVar:
      throw EvalError("UnboundVariable",
                      "free recursion variable '" + p->var + "' at runtime");
  }
}

}  // namespace

std::vector<std::pair<ExplicitAction, ProcPtr>> step(const ProcPtr& p,
                                                     const Universe& universe) {
  std::vector<std::pair<ExplicitAction, ProcPtr>> out;
  collect_steps(resolve_head(p), universe, out);
  return out;
}

std::vector<ProcPtr> weak_step(const ProcPtr& p, const Action& action,
                               const Universe& universe, int tau_bound) {
  // τ-closure by rounds, then one α-step.
  std::map<std::string, ProcPtr> closure;
  ProcPtr start = resolve_head(p);
  closure[process_str(start)] = start;
  std::vector<ProcPtr> frontier{start};
  int rounds = 0;
  while (!frontier.empty()) {
    std::vector<ProcPtr> next;
    for (const auto& q : frontier)
      for (const auto& [u, r] : step(q, universe)) {
        if (!u.is_tau()) continue;
        std::string key = process_str(r);
        if (closure.emplace(key, r).second) next.push_back(r);
      }
    if (!next.empty() && ++rounds > tau_bound)
      throw BoundError("BoundExceeded", "tau-chain longer than " +
                                            std::to_string(tau_bound) + " steps");
    frontier = std::move(next);
  }
  std::map<std::string, ProcPtr> results;
  for (const auto& [key, q] : closure)
    for (const auto& [u, r] : step(q, universe))
      if (!u.is_tau() && u.action() == action) results.emplace(process_str(r), r);
  std::vector<ProcPtr> out;
  for (const auto& [key, r] : results) out.push_back(r);
  return out;
}

ProcPtr trace_system(const ExplicitTrace& t) {
  ProcPtr cont = proc_nil();
  int binder = static_cast<int>(t.size());
  for (auto it = t.rbegin(); it != t.rend(); ++it) {
    --binder;
    if (it->is_tau()) {
      cont = proc_tau(cont);
    } else if (it->action().dir == Direction::In) {
      cont = proc_input(it->action().port, "x" + std::to_string(binder), cont);
    } else {
      cont = proc_output(it->action().port, expr_const(it->action().payload), cont);
    }
  }
  return cont;
}

Lts explore_lts(const ProcPtr& p, const Universe& universe, int state_bound) {
  Lts lts;
  std::map<std::string, int> index;
  std::vector<ProcPtr> terms;
  std::deque<int> work;
  auto intern = [&](const ProcPtr& q) {
    std::string key = process_str(q);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (static_cast<int>(terms.size()) >= state_bound)
      throw BoundError("StateBoundExceeded",
                       "more than " + std::to_string(state_bound) + " distinct states");
    int id = static_cast<int>(terms.size());
    index.emplace(std::move(key), id);
    terms.push_back(q);
    lts.labels.push_back(process_str(q));
    lts.succ.emplace_back();
    work.push_back(id);
    return id;
  };
  lts.initial = intern(resolve_head(p));
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    std::set<std::pair<ExplicitAction, int>> edges;
    for (const auto& [u, q] : step(terms[id], universe)) edges.emplace(u, intern(q));
    lts.succ[id].assign(edges.begin(), edges.end());
  }
  return lts;
}

}  // namespace bienforce
