#pragma once

// Test-only reference semantics: the set-theoretic denotation of a formula
// over a finite LTS, computed directly (greatest fixpoints by iteration from
// the full state set). Deliberately independent of the satisfies()
// implementation, which it cross-checks.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bienforce/formula.hpp"
#include "bienforce/lts.hpp"

namespace oracle {

using namespace bienforce;

struct WeakSteps {
  // weak[s] = all (alpha, target) with s =tau*=> . -alpha-> target
  std::vector<std::vector<std::pair<Action, int>>> weak;

  explicit WeakSteps(const Lts& lts) {
    int n = lts.state_count();
    weak.resize(n);
    for (int s = 0; s < n; ++s) {
      std::set<int> closure{s};
      std::vector<int> frontier{s};
      while (!frontier.empty()) {
        std::vector<int> next;
        for (int q : frontier)
          for (const auto& [u, r] : lts.succ[q])
            if (u.is_tau() && closure.insert(r).second) next.push_back(r);
        frontier = std::move(next);
      }
      for (int q : closure)
        for (const auto& [u, r] : lts.succ[q])
          if (!u.is_tau()) weak[s].emplace_back(u.action(), r);
    }
  }
};

using Env = std::map<std::string, std::set<int>>;

inline std::set<int> denote(const Lts& lts, const WeakSteps& ws, const FormPtr& f,
                            const Env& rho) {
  int n = lts.state_count();
  std::set<int> all;
  for (int i = 0; i < n; ++i) all.insert(i);
  switch (f->kind) {
    case Formula::Kind::Tt:
      return all;
    case Formula::Kind::Ff:
      return {};
    case Formula::Kind::FVar:
      return rho.at(f->var);
    case Formula::Kind::Conj: {
      std::set<int> out = all;
      for (const auto& b : f->branches) {
        std::set<int> sat;
        for (int s = 0; s < n; ++s) {
          bool ok = true;
          for (const auto& [act, q] : ws.weak[s]) {
            auto sub = match_pattern(b.pat, act);
            if (!sub || !eval_condition(b.cond, *sub)) continue;
            std::set<int> cont = denote(lts, ws, subst_formula(b.cont, *sub), rho);
            if (!cont.count(q)) {
              ok = false;
              break;
            }
          }
          if (ok) sat.insert(s);
        }
        std::set<int> merged;
        for (int s : out)
          if (sat.count(s)) merged.insert(s);
        out = std::move(merged);
      }
      return out;
    }
    case Formula::Kind::Max: {
      std::set<int> current = all;
      for (;;) {
        Env inner = rho;
        inner[f->var] = current;
        std::set<int> next = denote(lts, ws, f->body, inner);
        if (next == current) return current;
        current = std::move(next);
      }
    }
  }
  return {};
}

inline bool oracle_satisfies(const Lts& lts, const FormPtr& f) {
  WeakSteps ws(lts);
  return denote(lts, ws, f, {}).count(lts.initial) != 0;
}

}  // namespace oracle
