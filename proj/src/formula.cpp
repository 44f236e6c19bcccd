#include "bienforce/formula.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "bienforce/errors.hpp"
#include "parse_common.hpp"

namespace bienforce {

namespace {

std::shared_ptr<Formula> node(Formula::Kind kind) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  return f;
}

}  // namespace

FormPtr f_tt() {
  static const FormPtr tt = node(Formula::Kind::Tt);
  return tt;
}

FormPtr f_ff() {
  static const FormPtr ff = node(Formula::Kind::Ff);
  return ff;
}

FormPtr f_conj(std::vector<NecBranch> branches) {
  auto f = node(Formula::Kind::Conj);
  f->branches = std::move(branches);
  return f;
}

FormPtr f_necessity(Pattern pat, CondPtr cond, FormPtr cont) {
  return f_conj({NecBranch{std::move(pat), std::move(cond), std::move(cont)}});
}

FormPtr f_max(std::string var, FormPtr body) {
  auto f = node(Formula::Kind::Max);
  f->var = std::move(var);
  f->body = std::move(body);
  return f;
}

FormPtr f_fvar(std::string var) {
  auto f = node(Formula::Kind::FVar);
  f->var = std::move(var);
  return f;
}

// ----------------------------------------------------------------- printing

namespace {

std::string necessity_str(const NecBranch& b) {
  std::string out = "[" + b.pat.str();
  if (!cond_is_true(b.cond)) out += ", " + cond_str(b.cond);
  out += "] ";
  // Multi-branch conjunctions and fixpoints (which scope maximally) need
  // parentheses when they continue a modality.
  bool parens = (b.cont->kind == Formula::Kind::Conj && b.cont->branches.size() > 1) ||
                b.cont->kind == Formula::Kind::Max;
  out += parens ? "(" + formula_str(b.cont) + ")" : formula_str(b.cont);
  return out;
}

}  // namespace

std::string formula_str(const FormPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Tt:
      return "tt";
    case Formula::Kind::Ff:
      return "ff";
    case Formula::Kind::FVar:
      return f->var;
    case Formula::Kind::Max: {
      bool parens = f->body->kind == Formula::Kind::Conj && f->body->branches.size() > 1;
      std::string body = formula_str(f->body);
      return "max " + f->var + ". " + (parens ? "(" + body + ")" : body);
    }
    case Formula::Kind::Conj: {
      std::string out;
      for (std::size_t i = 0; i < f->branches.size(); ++i) {
        if (i) out += " & ";
        out += necessity_str(f->branches[i]);
      }
      return out;
    }
  }
  return {};
}

std::string formula_key(const FormPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Tt:
      return "tt";
    case Formula::Kind::Ff:
      return "ff";
    case Formula::Kind::FVar:
      return f->var;
    case Formula::Kind::Max:
      return "max " + f->var + ". " + formula_key(f->body);
    case Formula::Kind::Conj: {
      std::vector<std::string> parts;
      parts.reserve(f->branches.size());
      for (const auto& b : f->branches)
        parts.push_back("[" + b.pat.str() + ", " + cond_str(b.cond) + "](" +
                        formula_key(b.cont) + ")");
      std::sort(parts.begin(), parts.end());
      std::string out = "&{";
      for (const auto& p : parts) out += p;
      return out + "}";
    }
  }
  return {};
}

// ------------------------------------------------------------ substitutions

namespace {

void fv_data(const FormPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
    case Formula::Kind::FVar:
      return;
    case Formula::Kind::Max:
      fv_data(f->body, out);
      return;
    case Formula::Kind::Conj:
      for (const auto& b : f->branches) {
        std::set<std::string> inner;
        free_vars_cond(b.cond, inner);
        fv_data(b.cont, inner);
        for (const auto& v : bound_vars(b.pat)) inner.erase(v);
        out.insert(inner.begin(), inner.end());
      }
      return;
  }
}

void fv_fix(const FormPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
      return;
    case Formula::Kind::FVar:
      out.insert(f->var);
      return;
    case Formula::Kind::Max: {
      std::set<std::string> inner;
      fv_fix(f->body, inner);
      inner.erase(f->var);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case Formula::Kind::Conj:
      for (const auto& b : f->branches) fv_fix(b.cont, out);
      return;
  }
}

void all_idents(const FormPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
      return;
    case Formula::Kind::FVar:
      out.insert(f->var);
      return;
    case Formula::Kind::Max:
      out.insert(f->var);
      all_idents(f->body, out);
      return;
    case Formula::Kind::Conj:
      for (const auto& b : f->branches) {
        for (const auto& v : bound_vars(b.pat)) out.insert(v);
        std::set<std::string> cv;
        free_vars_cond(b.cond, cv);
        out.insert(cv.begin(), cv.end());
        all_idents(b.cont, out);
      }
      return;
  }
}

FormPtr rename_var_formula(const FormPtr& f, const std::string& from,
                           const std::string& to) {
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
    case Formula::Kind::FVar:
      return f;
    case Formula::Kind::Max:
      return f_max(f->var, rename_var_formula(f->body, from, to));
    case Formula::Kind::Conj: {
      std::vector<NecBranch> bs;
      bs.reserve(f->branches.size());
      for (const auto& br : f->branches) {
        if (bound_vars(br.pat).count(from)) {
          bs.push_back(br);  // shadowed
          continue;
        }
        NecBranch nb = br;
        nb.cond = rename_cond_var(nb.cond, from, to);
        nb.cont = rename_var_formula(nb.cont, from, to);
        bs.push_back(std::move(nb));
      }
      return f_conj(std::move(bs));
    }
  }
  return f;
}

// Renames one pattern binder and its uses in the branch condition/continuation.
NecBranch rename_binder(const NecBranch& b, const std::string& from,
                        const std::string& to) {
  NecBranch out = b;
  if (out.pat.port.kind == PatPart::Kind::Binder && out.pat.port.name == from)
    out.pat.port = PatPart::binder(to);
  if (out.pat.payload.kind == PatPart::Kind::Binder && out.pat.payload.name == from)
    out.pat.payload = PatPart::binder(to);
  out.cond = rename_cond_var(out.cond, from, to);
  out.cont = rename_var_formula(out.cont, from, to);
  return out;
}

}  // namespace

FormPtr subst_formula(const FormPtr& f, const Substitution& s) {
  if (s.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
    case Formula::Kind::FVar:
      return f;
    case Formula::Kind::Max:
      return f_max(f->var, subst_formula(f->body, s));
    case Formula::Kind::Conj: {
      std::vector<NecBranch> bs;
      bs.reserve(f->branches.size());
      for (const auto& b : f->branches) {
        Substitution inner = s;
        for (const auto& v : bound_vars(b.pat)) inner.erase(v);
        bs.push_back(NecBranch{subst_pattern(b.pat, s), subst_cond(b.cond, inner),
                               subst_formula(b.cont, inner)});
      }
      return f_conj(std::move(bs));
    }
  }
  return f;
}

namespace {

// body[g / var] for fixpoint variables, renaming clashing binders so nothing
// free in g gets captured.
FormPtr subst_fvar(const FormPtr& f, const std::string& var, const FormPtr& g,
                   const std::set<std::string>& g_free_fix,
                   const std::set<std::string>& g_free_data,
                   std::set<std::string>& used) {
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
      return f;
    case Formula::Kind::FVar:
      return f->var == var ? g : f;
    case Formula::Kind::Max: {
      if (f->var == var) return f;  // shadowed
      if (g_free_fix.count(f->var)) {
        std::string fresh = detail::fresh_name(f->var + "_r", used);
        used.insert(fresh);
        // Rename the fixpoint binder, then substitute.
        FormPtr renamed_body =
            subst_fvar(f->body, f->var, f_fvar(fresh), {}, {}, used);
        return f_max(fresh,
                     subst_fvar(renamed_body, var, g, g_free_fix, g_free_data, used));
      }
      return f_max(f->var, subst_fvar(f->body, var, g, g_free_fix, g_free_data, used));
    }
    case Formula::Kind::Conj: {
      std::vector<NecBranch> bs;
      bs.reserve(f->branches.size());
      for (const auto& b : f->branches) {
        NecBranch nb = b;
        for (const auto& bv : bound_vars(nb.pat)) {
          if (g_free_data.count(bv)) {
            std::string fresh = detail::fresh_name(bv + "_r", used);
            used.insert(fresh);
            nb = rename_binder(nb, bv, fresh);
          }
        }
        nb.cont = subst_fvar(nb.cont, var, g, g_free_fix, g_free_data, used);
        bs.push_back(std::move(nb));
      }
      return f_conj(std::move(bs));
    }
  }
  return f;
}

}  // namespace

FormPtr unfold_max(const FormPtr& max_formula) {
  std::set<std::string> gfix, gdata, used;
  fv_fix(max_formula, gfix);
  fv_data(max_formula, gdata);
  all_idents(max_formula, used);
  return subst_fvar(max_formula->body, max_formula->var, max_formula, gfix, gdata, used);
}

// -------------------------------------------------------------------- after

namespace {

// Reassembles componentwise after() results into one formula: tt is the
// conjunction unit, ff absorbs, and when several non-trivial components must
// merge, fixpoints are unfolded until each component exposes its conjunction
// (guardedness bounds the unfolding).
FormPtr combine_conjuncts(std::vector<FormPtr> results) {
  std::vector<FormPtr> nontrivial;
  for (const auto& r : results) {
    if (r->kind == Formula::Kind::Ff) return f_ff();
    if (r->kind != Formula::Kind::Tt) nontrivial.push_back(r);
  }
  if (nontrivial.empty()) return f_tt();
  if (nontrivial.size() == 1) return nontrivial[0];
  std::vector<NecBranch> merged;
  for (FormPtr r : nontrivial) {
    while (r->kind == Formula::Kind::Max) r = unfold_max(r);
    if (r->kind == Formula::Kind::Tt) continue;
    if (r->kind == Formula::Kind::Ff) return f_ff();
    if (r->kind != Formula::Kind::Conj)
      throw Error("OpenFormula", "cannot conjoin a free fixpoint variable");
    for (const auto& b : r->branches) merged.push_back(b);
  }
  if (merged.empty()) return f_tt();
  return f_conj(std::move(merged));
}

}  // namespace

FormPtr after(const FormPtr& f, const ExplicitAction& u) {
  if (u.is_tau()) return f;
  const Action& a = u.action();
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
      return f;
    case Formula::Kind::FVar:
      throw Error("OpenFormula", "after() needs a closed formula");
    case Formula::Kind::Max:
      return after(unfold_max(f), u);
    case Formula::Kind::Conj: {
      std::vector<FormPtr> results;
      results.reserve(f->branches.size());
      for (const auto& b : f->branches) {
        auto s = match_pattern(b.pat, a);
        if (s && eval_condition(b.cond, *s))
          results.push_back(subst_formula(b.cont, *s));
        else
          results.push_back(f_tt());
      }
      return combine_conjuncts(std::move(results));
    }
  }
  return f;
}

FormPtr after_trace(const FormPtr& f, const ExplicitTrace& t) {
  FormPtr cur = f;
  for (const auto& u : t) cur = after(cur, u);
  return cur;
}

// ------------------------------------------------------------------ parsing

namespace {

using detail::Cursor;
using detail::Scope;

struct FormulaParser {
  Cursor& c;
  std::set<std::string> used;  // identifiers in the source, for fresh binders
  int fresh_counter = 0;

  std::string fresh_binder() {
    for (;; ++fresh_counter) {
      std::string name = "v" + std::to_string(fresh_counter);
      if (!used.count(name)) {
        used.insert(name);
        return name;
      }
    }
  }

  FormPtr parse(Scope scope, std::set<std::string> fixvars) {
    FormPtr lhs = parse_modal(scope, fixvars);
    if (!c.is_punct("&")) return lhs;
    std::vector<NecBranch> branches = conjuncts_of(lhs);
    while (c.accept_punct("&")) {
      FormPtr rhs = parse_modal(scope, fixvars);
      for (auto& b : conjuncts_of(rhs)) branches.push_back(std::move(b));
    }
    return f_conj(std::move(branches));
  }

  std::vector<NecBranch> conjuncts_of(const FormPtr& f) {
    if (f->kind != Formula::Kind::Conj)
      c.fail("conjunction operands must be necessity formulas");
    return f->branches;
  }

  FormPtr parse_modal(Scope scope, std::set<std::string> fixvars) {
    if (c.accept_ident("tt")) return f_tt();
    if (c.accept_ident("ff")) return f_ff();
    if (c.accept_ident("max")) {
      // max scopes over the whole conjunction to its right.
      std::string var = c.expect_ident("fixpoint variable");
      c.expect_punct(".");
      fixvars.insert(var);
      return f_max(var, parse(scope, fixvars));
    }
    if (c.accept_punct("(")) {
      FormPtr inner = parse(scope, fixvars);
      c.expect_punct(")");
      return inner;
    }
    if (c.accept_punct("[")) return parse_necessity(scope, fixvars);
    const auto& t = c.peek();
    if (t.kind == detail::Token::Kind::Ident && !detail::is_keyword(t.text)) {
      std::string name = c.next().text;
      if (!fixvars.count(name))
        c.fail("unbound formula variable '" + name + "'");
      return f_fvar(name);
    }
    c.fail("expected a formula");
  }

  FormPtr parse_necessity(Scope scope, const std::set<std::string>& fixvars) {
    Pattern pat;
    CondPtr extra = cond_true();
    detail::PatSlot port_slot = detail::parse_pat_slot(c, scope);
    if (c.accept_punct("?"))
      pat.dir = Direction::In;
    else if (c.accept_punct("!"))
      pat.dir = Direction::Out;
    else
      c.fail("expected '?' or '!' in pattern");
    detail::PatSlot payload_slot = detail::parse_pat_slot(c, scope);

    auto desugar = [&](const detail::PatSlot& slot, bool is_port) -> PatPart {
      switch (slot.kind) {
        case detail::PatSlot::Kind::Binder:
          return PatPart::binder(slot.name);
        case detail::PatSlot::Kind::DontCare:
          return PatPart::dont_care();
        case detail::PatSlot::Kind::Expr: {
          if (is_port && slot.expr->kind != Expr::Kind::Var &&
              slot.expr->kind != Expr::Kind::Const)
            c.fail("port position needs an identifier");
          if (!is_port && pat.dir == Direction::In)
            c.fail("input patterns cannot constrain the payload value",
                   "PayloadConstrainedInput");
          std::string binder = fresh_binder();
          extra = cond_is_true(extra)
                      ? cond_cmp(CmpOp::Eq, expr_var(binder), slot.expr)
                      : cond_and(extra,
                                 cond_cmp(CmpOp::Eq, expr_var(binder), slot.expr));
          return PatPart::binder(binder);
        }
      }
      return PatPart::dont_care();
    };
    pat.port = desugar(port_slot, true);
    pat.payload = desugar(payload_slot, false);
    if (pat.port.kind == PatPart::Kind::Binder &&
        pat.payload.kind == PatPart::Kind::Binder && pat.port.name == pat.payload.name)
      c.fail("pattern binders must be pairwise distinct");

    Scope inner = scope.with(bound_vars(pat));
    CondPtr user_cond = cond_true();
    if (c.accept_punct(",")) user_cond = detail::parse_condition(c, inner);
    c.expect_punct("]");
    if (pat.dir == Direction::In && pat.payload.kind == PatPart::Kind::Binder) {
      std::set<std::string> fv;
      free_vars_cond(user_cond, fv);
      if (fv.count(pat.payload.name))
        c.fail("input condition restricts payload binder '" + pat.payload.name + "'",
               "PayloadConstrainedInput");
    }
    CondPtr cond = cond_is_true(extra)
                       ? user_cond
                       : (cond_is_true(user_cond) ? extra : cond_and(extra, user_cond));
    FormPtr cont = parse_modal(inner, fixvars);
    return f_necessity(std::move(pat), std::move(cond), std::move(cont));
  }
};

void check_guarded_fvars(const FormPtr& f, const std::set<std::string>& unguarded) {
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
      return;
    case Formula::Kind::FVar:
      if (unguarded.count(f->var))
        throw ParseError("UnguardedFixpointVariable",
                         "fixpoint variable '" + f->var + "' is not guarded", 1, 1);
      return;
    case Formula::Kind::Max: {
      std::set<std::string> inner = unguarded;
      inner.insert(f->var);
      check_guarded_fvars(f->body, inner);
      return;
    }
    case Formula::Kind::Conj:
      for (const auto& b : f->branches) check_guarded_fvars(b.cont, {});
      return;
  }
}

}  // namespace

FormPtr parse_formula(const std::string& text) {
  auto tokens = detail::tokenize(text);
  Cursor c(tokens);
  FormulaParser parser{c, detail::identifiers_of(tokens)};
  FormPtr f = parser.parse(Scope{}, {});
  if (!c.at_end()) c.fail("trailing input after formula");
  check_guarded_fvars(f, {});
  return f;
}

// -------------------------------------------------------------- normal form

namespace {

// Where a subformula sits: at the root, in an unguarded fixpoint chain below
// it, or under a modal operator. tt/ff may appear at the root or guarded.
enum class NfContext { Root, UnguardedChain, Guarded };

bool nf_check(const FormPtr& f, const Universe& universe,
              const std::vector<Substitution>& envs, NfContext ctx, NfDiagnostics& diag) {
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
      if (ctx == NfContext::UnguardedChain) {
        diag.normal = false;
        diag.clause = "tt/ff below top level";
        diag.detail = formula_str(f) + " occurs unguarded below the top level";
        return false;
      }
      return true;
    case Formula::Kind::FVar:
      return true;
    case Formula::Kind::Max: {
      std::set<std::string> free;
      fv_fix(f->body, free);
      if (!free.count(f->var)) {
        diag.normal = false;
        diag.clause = "unused fixpoint variable";
        diag.detail = "'" + f->var + "' does not occur in the body of its fixpoint";
        return false;
      }
      return nf_check(f->body, universe, envs, NfContext::UnguardedChain, diag);
    }
    case Formula::Kind::Conj: {
      const auto actions = universe.action_set();
      for (const auto& env : envs) {
        for (std::size_t i = 0; i < f->branches.size(); ++i) {
          for (std::size_t j = i + 1; j < f->branches.size(); ++j) {
            for (const auto& act : actions) {
              auto si = match_pattern(subst_pattern(f->branches[i].pat, env), act);
              auto sj = match_pattern(subst_pattern(f->branches[j].pat, env), act);
              if (!si || !sj) continue;
              Substitution ci = env, cj = env;
              for (auto& [k, v] : *si) ci[k] = v;
              for (auto& [k, v] : *sj) cj[k] = v;
              if (eval_condition(f->branches[i].cond, ci) &&
                  eval_condition(f->branches[j].cond, cj)) {
                diag.normal = false;
                diag.clause = "overlapping conjuncts";
                diag.witness = act;
                diag.detail = "action " + act.str() + " matches both " +
                              f->branches[i].pat.str() + " and " +
                              f->branches[j].pat.str();
                return false;
              }
            }
          }
        }
      }
      for (const auto& b : f->branches) {
        // Extend each reachable environment by this branch's matches.
        std::vector<Substitution> next;
        std::set<std::string> keys;
        for (const auto& env : envs) {
          for (const auto& act : actions) {
            auto s = match_pattern(subst_pattern(b.pat, env), act);
            if (!s) continue;
            Substitution combined = env;
            for (auto& [k, v] : *s) combined[k] = v;
            if (!eval_condition(b.cond, combined)) continue;
            std::string key;
            for (const auto& [k, v] : combined) key += k + "=" + v.str() + ";";
            if (keys.insert(key).second) next.push_back(combined);
          }
        }
        if (!nf_check(b.cont, universe, next, NfContext::Guarded, diag)) return false;
      }
      return true;
    }
  }
  return true;
}

}  // namespace

NfDiagnostics is_normal_form(const FormPtr& f, const Universe& universe) {
  NfDiagnostics diag;
  try {
    check_guarded_fvars(f, {});
  } catch (const ParseError& e) {
    diag.normal = false;
    diag.clause = "unguarded fixpoint variable";
    diag.detail = e.what();
    return diag;
  }
  nf_check(f, universe, {Substitution{}}, NfContext::Root, diag);
  return diag;
}

// -------------------------------------------------------------- satisfaction

SatResult satisfies(const Lts& lts, const FormPtr& f, int closure_bound) {
  const int n = lts.state_count();
  // tau-closure with predecessor links, for explicit witnesses.
  std::vector<std::vector<int>> tau_reach(n);
  std::vector<std::unordered_map<int, int>> tau_parent(n);
  for (int s = 0; s < n; ++s) {
    std::deque<int> work{s};
    tau_parent[s][s] = -1;
    while (!work.empty()) {
      int q = work.front();
      work.pop_front();
      tau_reach[s].push_back(q);
      for (const auto& [u, r] : lts.succ[q]) {
        if (!u.is_tau()) continue;
        if (tau_parent[s].emplace(r, q).second) work.push_back(r);
      }
    }
  }
  auto tau_path = [&](int from, int to) {
    std::vector<int> rev;
    for (int q = to; q != from; q = tau_parent[from][q]) rev.push_back(q);
    ExplicitTrace path(rev.size(), ExplicitAction::tau());
    return path;
  };

  struct NodeData {
    int state;
    FormPtr f;
    int parent;
    ExplicitTrace edge;
  };
  std::vector<NodeData> nodes;
  std::unordered_set<std::string> visited;
  std::unordered_set<std::string> formula_keys;
  std::deque<int> work;

  auto push = [&](int state, const FormPtr& g, int parent, ExplicitTrace edge) {
    std::string fkey = formula_key(g);
    formula_keys.insert(fkey);
    if (static_cast<int>(formula_keys.size()) > closure_bound)
      throw BoundError("ClosureBoundExceeded",
                       "more than " + std::to_string(closure_bound) +
                           " instantiated subformulas");
    std::string key = std::to_string(state) + "|" + fkey;
    if (!visited.insert(key).second) return;
    nodes.push_back(NodeData{state, g, parent, std::move(edge)});
    work.push_back(static_cast<int>(nodes.size()) - 1);
  };

  auto witness_of = [&](int node) {
    std::vector<int> chain;
    for (int i = node; i != -1; i = nodes[i].parent) chain.push_back(i);
    ExplicitTrace t;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      t.insert(t.end(), nodes[*it].edge.begin(), nodes[*it].edge.end());
    return t;
  };

  push(lts.initial, f, -1, {});
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    int state = nodes[id].state;
    FormPtr g = nodes[id].f;
    switch (g->kind) {
      case Formula::Kind::Tt:
        break;
      case Formula::Kind::Ff:
        return SatResult{false, witness_of(id)};
      case Formula::Kind::FVar:
        throw Error("OpenFormula", "satisfaction needs a closed formula");
      case Formula::Kind::Max:
        push(state, unfold_max(g), id, {});
        break;
      case Formula::Kind::Conj:
        for (const auto& b : g->branches) {
          for (int q : tau_reach[state]) {
            for (const auto& [u, r] : lts.succ[q]) {
              if (u.is_tau()) continue;
              auto s = match_pattern(b.pat, u.action());
              if (!s || !eval_condition(b.cond, *s)) continue;
              ExplicitTrace edge = tau_path(state, q);
              edge.push_back(u);
              push(r, subst_formula(b.cont, *s), id, std::move(edge));
            }
          }
        }
        break;
    }
  }
  return SatResult{true, {}};
}

}  // namespace bienforce
