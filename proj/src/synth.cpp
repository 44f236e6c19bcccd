#include "bienforce/synth.hpp"

#include <map>
#include <set>

#include "bienforce/errors.hpp"
#include "parse_common.hpp"

namespace bienforce {

namespace {

void collect_formula_idents(const FormPtr& f, std::set<std::string>& used) {
  switch (f->kind) {
    case Formula::Kind::Tt:
    case Formula::Kind::Ff:
      return;
    case Formula::Kind::FVar:
      used.insert(f->var);
      return;
    case Formula::Kind::Max:
      used.insert(f->var);
      collect_formula_idents(f->body, used);
      return;
    case Formula::Kind::Conj:
      for (const auto& b : f->branches) {
        for (const auto& v : bound_vars(b.pat)) used.insert(v);
        std::set<std::string> cv;
        free_vars_cond(b.cond, cv);
        used.insert(cv.begin(), cv.end());
        collect_formula_idents(b.cont, used);
      }
      return;
  }
}

struct FreshNames {
  std::set<std::string> used;
  std::string take(const std::string& stem) {
    std::string name = detail::fresh_name(stem, used);
    used.insert(name);
    return name;
  }
};

TrnPtr dis_branch_named(const Pattern& pat, const CondPtr& cond, const TrnPtr& cont,
                        const SynthesisConfig& cfg) {
  if (pat.dir == Direction::Out) {
    return t_prefix(pat, cond, TransformAction::dot(), cont);
  }
  std::vector<TrnPtr> inserts;
  inserts.reserve(cfg.ports.size());
  for (const auto& q : cfg.ports) {
    CondPtr inst = pat.port.kind == PatPart::Kind::Binder
                       ? subst_cond(cond, {{pat.port.name, Value::atom(q)}})
                       : cond;
    TransformAction tact = TransformAction::action_template(
        Direction::In, PatPart::lit_port(q), expr_const(cfg.default_value));
    inserts.push_back(t_insertion(inst, tact, cont));
  }
  return t_sum(std::move(inserts));
}

TrnPtr default_branch_named(const FormPtr& conj, FreshNames& names) {
  std::vector<const NecBranch*> input_branches;
  for (const auto& b : conj->branches)
    if (b.pat.dir == Direction::In) input_branches.push_back(&b);
  if (input_branches.empty()) {
    Pattern pat{Direction::In, PatPart::binder(names.take("x_d")),
                PatPart::binder(names.take("y_d"))};
    return t_prefix(pat, cond_true(), TransformAction::replay(), identity_monitor());
  }
  std::string port_var = names.take("x_d");
  Pattern pat{Direction::In, PatPart::binder(port_var), PatPart::dont_care()};
  CondPtr guard;
  for (const NecBranch* b : input_branches) {
    CondPtr negated = cond_not(
        b->pat.port.kind == PatPart::Kind::Binder
            ? rename_cond_var(b->cond, b->pat.port.name, port_var)
            : b->cond);
    guard = guard ? cond_and(guard, negated) : negated;
  }
  return t_prefix(pat, guard, TransformAction::replay(), identity_monitor());
}

struct Synthesizer {
  const SynthesisConfig& cfg;
  FreshNames names;
  std::map<std::string, std::string> recvar_of;  // formula var -> monitor var
  std::set<std::string> assigned;                // monitor rec vars handed out

  TrnPtr run(const FormPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Tt:
      case Formula::Kind::Ff:
        return identity_monitor();
      case Formula::Kind::FVar: {
        auto it = recvar_of.find(f->var);
        if (it == recvar_of.end())
          throw Error("NotNormalForm", "free fixpoint variable '" + f->var + "'");
        return t_tvar(it->second);
      }
      case Formula::Kind::Max: {
        auto saved = recvar_of;
        // Formula variables map bijectively onto recursion variables; a
        // shadowed rebinding of the same name gets a fresh one.
        std::string rec = assigned.count(f->var) ? names.take(f->var + "_r") : f->var;
        assigned.insert(rec);
        recvar_of[f->var] = rec;
        TrnPtr body = run(f->body);
        recvar_of = saved;
        return t_rec(rec, body);
      }
      case Formula::Kind::Conj: {
        std::string rec = names.take("y");
        std::vector<TrnPtr> branches;
        for (const auto& b : f->branches) {
          if (b.cont->kind == Formula::Kind::Ff) {
            branches.push_back(dis_branch_named(b.pat, b.cond, t_tvar(rec), cfg));
          } else {
            branches.push_back(
                t_prefix(b.pat, b.cond, TransformAction::replay(), run(b.cont)));
          }
        }
        branches.push_back(default_branch_named(f, names));
        return t_rec(rec, t_sum(std::move(branches)));
      }
    }
    throw Error("NotNormalForm", "unexpected formula shape");
  }
};

}  // namespace

TrnPtr synthesize(const FormPtr& f, const SynthesisConfig& cfg, const Universe& universe) {
  NfDiagnostics nf = is_normal_form(f, universe);
  if (!nf.normal) {
    std::string detail = nf.clause + (nf.detail.empty() ? "" : ": " + nf.detail);
    if (nf.witness) detail += " (witness " + nf.witness->str() + ")";
    throw Error("NotNormalForm", detail);
  }
  Synthesizer syn{cfg, {}, {}, {}};
  collect_formula_idents(f, syn.names.used);
  for (const auto& p : cfg.ports) syn.names.used.insert(p);
  return syn.run(f);
}

TrnPtr dis_branch(const Pattern& pat, const CondPtr& cond, const TrnPtr& cont,
                  const SynthesisConfig& cfg) {
  return dis_branch_named(pat, cond, cont, cfg);
}

TrnPtr default_branch(const FormPtr& conj) {
  if (conj->kind != Formula::Kind::Conj)
    throw Error("NotNormalForm", "default branch needs a conjunction");
  FreshNames names;
  collect_formula_idents(conj, names.used);
  return default_branch_named(conj, names);
}

namespace {

void free_recvars(const TrnPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case Transducer::Kind::TVar:
      out.insert(e->var);
      return;
    case Transducer::Kind::Rec: {
      std::set<std::string> inner;
      free_recvars(e->body, inner);
      inner.erase(e->var);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case Transducer::Kind::Sum:
      for (const auto& b : e->branches) free_recvars(b, out);
      return;
    case Transducer::Kind::Prefix:
      free_recvars(e->cont, out);
      return;
  }
}

}  // namespace

TrnPtr simplify_monitor(const TrnPtr& e) {
  switch (e->kind) {
    case Transducer::Kind::TVar:
      return e;
    case Transducer::Kind::Rec: {
      TrnPtr body = simplify_monitor(e->body);
      std::set<std::string> free;
      free_recvars(body, free);
      if (!free.count(e->var)) return body;
      return body == e->body ? e : t_rec(e->var, body);
    }
    case Transducer::Kind::Sum: {
      std::vector<TrnPtr> branches;
      branches.reserve(e->branches.size());
      bool changed = false;
      for (const auto& b : e->branches) {
        branches.push_back(simplify_monitor(b));
        changed = changed || branches.back() != b;
      }
      return changed ? t_sum(std::move(branches)) : e;
    }
    case Transducer::Kind::Prefix: {
      TrnPtr cont = simplify_monitor(e->cont);
      if (cont == e->cont) return e;
      if (e->pat_is_dot) return t_insertion(e->cond, e->tact, cont);
      return t_prefix(e->pat, e->cond, e->tact, cont);
    }
  }
  return e;
}

}  // namespace bienforce
