#include "bienforce/analysis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>

#include "bienforce/errors.hpp"

namespace bienforce {

// ------------------------------------------------------------- bisimulation

namespace {

struct Union {
  const Lts& a;
  const Lts& b;
  int offset;  // b's states shifted by a.state_count()

  int states() const { return a.state_count() + b.state_count(); }
  const std::vector<std::pair<ExplicitAction, int>>& succ(int s) const {
    return s < offset ? a.succ[s] : b.succ[s - offset];
  }
  int map_target(int s, int t) const { return s < offset ? t : t + offset; }
};

}  // namespace

BisimResult bisimilar(const Lts& a, const Lts& b) {
  Union u{a, b, a.state_count()};
  int n = u.states();
  // Signature refinement to the coarsest stable partition, keeping each
  // round's partition so distinguishing evidence can be kept short.
  std::vector<std::vector<int>> rounds;
  rounds.emplace_back(n, 0);
  for (;;) {
    const std::vector<int>& block = rounds.back();
    std::map<std::pair<int, std::set<std::pair<std::string, int>>>, int> classes;
    std::vector<int> next(n);
    for (int s = 0; s < n; ++s) {
      std::set<std::pair<std::string, int>> sig;
      for (const auto& [act, t] : u.succ(s))
        sig.emplace(act.str(), block[u.map_target(s, t)]);
      auto key = std::make_pair(block[s], std::move(sig));
      auto it = classes.find(key);
      if (it == classes.end())
        it = classes.emplace(std::move(key), static_cast<int>(classes.size())).first;
      next[s] = it->second;
    }
    bool stable = static_cast<int>(classes.size()) ==
                  *std::max_element(block.begin(), block.end()) + 1;
    rounds.push_back(std::move(next));
    if (stable) break;
  }
  const std::vector<int>& final_block = rounds.back();

  int left = a.initial;
  int right = b.initial + u.offset;
  if (final_block[left] == final_block[right]) return BisimResult{true, {}};

  // The first round separating a pair strictly decreases along the descent,
  // so the evidence trace is at most as long as the number of rounds.
  auto level_of = [&](int s, int t) {
    for (std::size_t r = 0; r < rounds.size(); ++r)
      if (rounds[r][s] != rounds[r][t]) return r;
    return rounds.size();
  };
  std::string why;
  int s = left, t = right;
  for (;;) {
    std::size_t level = level_of(s, t);
    if (level == rounds.size()) break;  // cannot happen for a refuted pair
    const std::vector<int>& prev = rounds[level - 1];
    // Their round-(level-1) signatures differ: find the action and target
    // class one side reaches and the other does not.
    bool done = false;
    for (bool left_side : {true, false}) {
      int here = left_side ? s : t;
      int there = left_side ? t : s;
      for (const auto& [act, raw] : u.succ(here)) {
        int s2 = u.map_target(here, raw);
        bool matched = false;
        bool any = false;
        int fallback = -1;
        for (const auto& [act2, raw2] : u.succ(there)) {
          if (act2 != act) continue;
          any = true;
          int t2 = u.map_target(there, raw2);
          fallback = t2;
          if (prev[t2] == prev[s2]) matched = true;
        }
        if (matched) continue;
        if (!why.empty()) why += " then ";
        why += act.str();
        if (!any) {
          why += left_side ? " (the right-hand system cannot perform it)"
                           : " (the left-hand system cannot perform it)";
          done = true;
          break;
        }
        s = left_side ? s2 : fallback;
        t = left_side ? fallback : s2;
        done = level_of(s, t) == rounds.size();
        break;
      }
      if (done || level_of(s, t) < level) break;
    }
    if (done) break;
    if (level_of(s, t) >= level) break;  // defensive: no progress possible
  }
  return BisimResult{false, why.empty() ? "distinct behaviour classes" : why};
}

// --------------------------------------------------------------- §4 checkers

std::string verdict_status_str(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Holds:
      return "Holds";
    case VerdictStatus::FailsWithWitness:
      return "FailsWithWitness";
    case VerdictStatus::InconclusiveAtBound:
      return "InconclusiveAtBound";
  }
  return {};
}

namespace {

std::string satisfiability_note(const FormPtr& f, const std::vector<ProcPtr>& corpus,
                                const Universe& universe, const CheckLimits& limits) {
  for (const auto& p : corpus) {
    try {
      if (satisfies(explore_lts(p, universe, limits.state_bound), f,
                    limits.closure_bound)
              .holds)
        return {};
    } catch (const BoundError&) {
    }
  }
  return "satisfiability precondition unverified: no corpus member satisfies the formula";
}

}  // namespace

Verdict check_soundness(const TrnPtr& e, const FormPtr& f,
                        const std::vector<ProcPtr>& corpus, const Universe& universe,
                        const CheckLimits& limits) {
  Verdict v;
  v.bound = limits.state_bound;
  v.note = satisfiability_note(f, corpus, universe, limits);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      CompositeLts c = explore_composite(CompositeState{e, corpus[i]}, universe,
                                         limits.state_bound);
      SatResult r = satisfies(c.to_lts(), f, limits.closure_bound);
      if (!r.holds) {
        v.status = VerdictStatus::FailsWithWitness;
        v.witness = r.witness;
        v.description =
            "composite run of corpus member #" + std::to_string(i) + " violates the formula";
        return v;
      }
    } catch (const BoundError& err) {
      v.status = VerdictStatus::InconclusiveAtBound;
      v.description = err.what();
      return v;
    }
  }
  v.status = VerdictStatus::Holds;
  return v;
}

Verdict check_transparency(const TrnPtr& e, const FormPtr& f,
                           const std::vector<ProcPtr>& corpus, const Universe& universe,
                           const CheckLimits& limits) {
  Verdict v;
  v.bound = limits.state_bound;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      Lts plain = explore_lts(corpus[i], universe, limits.state_bound);
      if (!satisfies(plain, f, limits.closure_bound).holds) continue;
      CompositeLts c = explore_composite(CompositeState{e, corpus[i]}, universe,
                                         limits.state_bound);
      BisimResult b = bisimilar(c.to_lts(), plain);
      if (!b.bisimilar) {
        v.status = VerdictStatus::FailsWithWitness;
        v.description = "corpus member #" + std::to_string(i) +
                        " satisfies the formula but e[p] !~ p: " + b.distinguisher;
        return v;
      }
    } catch (const BoundError& err) {
      v.status = VerdictStatus::InconclusiveAtBound;
      v.description = err.what();
      return v;
    }
  }
  v.status = VerdictStatus::Holds;
  return v;
}

Verdict check_eventual_transparency(const TrnPtr& e, const FormPtr& f,
                                    const std::vector<ProcPtr>& corpus,
                                    const Universe& universe, const CheckLimits& limits) {
  Verdict v;
  v.bound = limits.depth;
  for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
    try {
      CompositeLts comp = explore_composite(CompositeState{e, corpus[ci]}, universe,
                                            limits.state_bound);
      Lts clts = comp.to_lts();

      // Memoized per-process LTSs and satisfaction results.
      std::map<std::string, Lts> proc_lts;
      auto lts_of = [&](const ProcPtr& p) -> const Lts& {
        std::string key = process_str(p);
        auto it = proc_lts.find(key);
        if (it == proc_lts.end())
          it = proc_lts.emplace(key, explore_lts(p, universe, limits.state_bound)).first;
        return it->second;
      };

      struct Node {
        int state;
        FormPtr residual;
        int parent;
        ExplicitTrace edge;
      };
      std::vector<Node> nodes;
      std::set<std::string> seen;
      std::deque<std::pair<int, int>> work;  // node id, visible depth
      // 0-1 BFS: tau edges keep the depth and go to the front, so the first
      // visit of a (state, residual) pair happens at its minimal depth.
      auto push = [&](int state, FormPtr residual, int parent, ExplicitTrace edge,
                      int depth, bool front) {
        std::string key = std::to_string(state) + "|" + formula_key(residual);
        if (!seen.insert(key).second) return;
        nodes.push_back(Node{state, std::move(residual), parent, std::move(edge)});
        if (front)
          work.emplace_front(static_cast<int>(nodes.size()) - 1, depth);
        else
          work.emplace_back(static_cast<int>(nodes.size()) - 1, depth);
      };
      auto witness_of = [&](int id) {
        std::vector<int> chain;
        for (int i = id; i != -1; i = nodes[i].parent) chain.push_back(i);
        ExplicitTrace t;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it)
          t.insert(t.end(), nodes[*it].edge.begin(), nodes[*it].edge.end());
        return t;
      };

      std::map<int, bool> bisim_memo;  // composite state -> e'[p'] ~ p'
      std::map<std::string, bool> sat_memo;

      push(comp.initial, f, -1, {}, 0, false);
      while (!work.empty()) {
        auto [id, depth] = work.front();
        work.pop_front();
        int state = nodes[id].state;
        const FormPtr residual = nodes[id].residual;
        const ProcPtr proc = comp.states[state].process;

        std::string sat_key = process_str(proc) + "|" + formula_key(residual);
        auto sit = sat_memo.find(sat_key);
        if (sit == sat_memo.end())
          sit = sat_memo
                    .emplace(sat_key,
                             satisfies(lts_of(proc), residual, limits.closure_bound).holds)
                    .first;
        if (sit->second) {
          auto bit = bisim_memo.find(state);
          if (bit == bisim_memo.end()) {
            Lts rooted = clts;
            rooted.initial = state;
            bit = bisim_memo.emplace(state, bisimilar(rooted, lts_of(proc)).bisimilar)
                      .first;
          }
          if (!bit->second) {
            v.status = VerdictStatus::FailsWithWitness;
            v.witness = witness_of(id);
            v.description = "corpus member #" + std::to_string(ci) + ": after " +
                            (v.witness.empty() ? std::string("the empty trace")
                                               : trace_str(v.witness)) +
                            " the residual " + comp.labels[state] +
                            " satisfies the residual formula but is not bisimilar to "
                            "its system component";
            return v;
          }
        }

        for (const auto& edge : comp.succ[state]) {
          if (edge.action.is_tau()) {
            push(edge.target, residual, id, {ExplicitAction::tau()}, depth, true);
          } else if (depth < limits.depth) {
            push(edge.target, after(residual, edge.action), id, {edge.action},
                 depth + 1, false);
          }
        }
      }
    } catch (const BoundError& err) {
      v.status = VerdictStatus::InconclusiveAtBound;
      v.description = err.what();
      return v;
    }
  }
  v.status = VerdictStatus::Holds;
  return v;
}

// ----------------------------------------------------------------------- mc

McResult modification_count(const TrnPtr& e, const ExplicitTrace& t,
                            const Universe& universe, int step_bound) {
  const int len = static_cast<int>(t.size());
  // The trace system and its runtime continuation chain: suffix i is the
  // exact term the composite's system component holds after consuming i
  // elements, so target terms can be compared by their canonical text.
  std::vector<ProcPtr> suffix_system(len + 1);
  std::vector<std::string> suffix_key(len + 1);
  std::vector<long> residual_visible(len + 1, 0);
  suffix_system[0] = trace_system(t);
  for (int i = 1; i <= len; ++i) suffix_system[i] = suffix_system[i - 1]->a;
  for (int i = 0; i <= len; ++i) {
    suffix_key[i] = process_str(suffix_system[i]);
    residual_visible[i] =
        static_cast<long>(visible_length(ExplicitTrace(t.begin() + i, t.end())));
  }

  struct NodeInfo {
    TrnPtr monitor;
    int idx;
    long dist = -1;
    int parent = -1;
    McEntry via;
    bool terminal = false;
    std::vector<std::tuple<int, long, McEntry>> edges;  // target, cost, entry
    bool expanded = false;
  };
  std::vector<NodeInfo> nodes;
  std::map<std::string, int> index;
  auto intern = [&](const TrnPtr& m, int idx) -> int {
    std::string key = monitor_str(m) + "\x1f" + std::to_string(idx);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    index.emplace(std::move(key), id);
    NodeInfo n;
    n.monitor = m;
    n.idx = idx;
    nodes.push_back(std::move(n));
    return id;
  };

  auto expand = [&](int id) {
    if (nodes[id].expanded) return;
    nodes[id].expanded = true;
    const int idx = nodes[id].idx;
    const TrnPtr mon = nodes[id].monitor;
    auto steps = composite_step(CompositeState{mon, suffix_system[idx]}, universe);
    if (steps.empty()) {
      nodes[id].terminal = true;
      return;
    }
    for (const auto& cs : steps) {
      // Adjacent suffix systems never print alike (one has an extra prefix),
      // so the target term decides whether the trace head was consumed.
      bool advanced =
          idx < len && process_str(cs.target.process) == suffix_key[idx + 1];
      McEntry entry;
      entry.rule = rule_str(cs.rules.front());
      entry.emitted = cs.action;
      long cost;
      int target;
      if (advanced) {
        entry.consumed = t[idx];
        bool identity = cs.action == t[idx];
        entry.clause = identity ? "identity" : "modify";
        cost = identity ? 0 : 1;
        target = intern(cs.target.monitor, idx + 1);
      } else {
        entry.clause = "insert";
        cost = 1;
        target = intern(cs.target.monitor, idx);
      }
      nodes[id].edges.emplace_back(target, cost, std::move(entry));
    }
  };

  // Uniform-cost search; every cycle has positive cost, so settling is final.
  using QItem = std::pair<long, int>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> queue;
  int root = intern(e, 0);
  nodes[root].dist = 0;
  queue.emplace(0, root);
  std::vector<bool> settled;
  long best = -1;
  int best_node = -1;
  McResult result;
  while (!queue.empty()) {
    auto [d, id] = queue.top();
    queue.pop();
    if (d != nodes[id].dist) continue;
    if (static_cast<int>(nodes.size()) > step_bound) {
      result.divergent = true;
      return result;
    }
    expand(id);
    if (nodes[id].terminal) {
      long total = d + residual_visible[nodes[id].idx];
      if (best == -1 || total < best) {
        best = total;
        best_node = id;
      }
      // Any further node with dist >= best cannot improve: residuals are >= 0,
      // but a deeper node may still reach a smaller residual, so keep going
      // until the frontier distance alone exceeds best.
    }
    if (best != -1 && d >= best) break;
    for (std::size_t k = 0; k < nodes[id].edges.size(); ++k) {
      auto [target, cost, entry] = nodes[id].edges[k];
      long nd = d + cost;
      if (nodes[target].dist == -1 || nd < nodes[target].dist) {
        nodes[target].dist = nd;
        nodes[target].parent = id;
        nodes[target].via = entry;
        queue.emplace(nd, target);
      }
    }
  }
  if (best == -1) {
    result.divergent = true;
    return result;
  }
  result.count = best;
  std::vector<int> chain;
  for (int i = best_node; i != -1; i = nodes[i].parent) chain.push_back(i);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    if (*it == root) continue;
    result.derivation.push_back(nodes[*it].via);
  }
  if (residual_visible[nodes[best_node].idx] > 0) {
    McEntry blocked;
    blocked.clause = "blocked";
    blocked.residual = residual_visible[nodes[best_node].idx];
    result.derivation.push_back(std::move(blocked));
  }
  return result;
}

// ------------------------------------------------------------------- compare

CompareReport compare_intrusiveness(const TrnPtr& candidate, const TrnPtr& reference,
                                    const std::vector<ExplicitTrace>& traces,
                                    const Universe& universe, int step_bound) {
  CompareReport report;
  report.candidate_etp = etp(candidate);
  report.reference_etp = etp(reference);
  report.etp_contained =
      std::includes(report.reference_etp.begin(), report.reference_etp.end(),
                    report.candidate_etp.begin(), report.candidate_etp.end());
  for (const auto& t : traces) {
    CompareRow row;
    row.trace = t;
    row.candidate = modification_count(candidate, t, universe, step_bound);
    row.reference = modification_count(reference, t, universe, step_bound);
    bool cand_inf = row.candidate.divergent;
    bool ref_inf = row.reference.divergent;
    row.candidate_worse =
        (cand_inf && !ref_inf) ||
        (!cand_inf && !ref_inf && row.candidate.count > row.reference.count);
    if (row.candidate_worse) report.candidate_never_worse = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------- generators

namespace {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(gen() % n); }
  bool chance(int percent) { return below(100) < percent; }
};

ExprPtr random_expr(Rng& rng, const Universe& universe,
                    const std::vector<std::string>& scope, int depth) {
  int pick = rng.below(10);
  if (!scope.empty() && pick < 4) return expr_var(scope[rng.below(scope.size())]);
  if (depth > 0 && pick == 4)
    return expr_cons("ans", {random_expr(rng, universe, scope, depth - 1)});
  if (depth > 0 && pick == 5)
    return expr_tuple({random_expr(rng, universe, scope, depth - 1),
                       random_expr(rng, universe, scope, depth - 1)});
  return expr_const(universe.values[rng.below(universe.values.size())]);
}

ProcPtr random_proc_rec(Rng& rng, const Universe& universe,
                        const std::vector<std::string>& input_ports, int size,
                        std::vector<std::string>& scope,
                        std::vector<std::string>& guarded_recvars,
                        std::vector<std::string>& pending_recvars, int& binder_id) {
  if (size <= 1) {
    if (!guarded_recvars.empty() && rng.chance(60))
      return proc_recvar(guarded_recvars[rng.below(guarded_recvars.size())]);
    return proc_nil();
  }
  int pick = rng.below(12);
  if (pick < 3) {  // input
    std::string binder = "g" + std::to_string(binder_id++);
    scope.push_back(binder);
    std::vector<std::string> now_guarded = guarded_recvars;
    for (const auto& r : pending_recvars) now_guarded.push_back(r);
    std::vector<std::string> no_pending;
    ProcPtr cont = random_proc_rec(rng, universe, input_ports, size - 1, scope,
                                   now_guarded, no_pending, binder_id);
    scope.pop_back();
    return proc_input(input_ports[rng.below(input_ports.size())], binder, cont);
  }
  if (pick < 6) {  // output
    ExprPtr payload = random_expr(rng, universe, scope, 1);
    std::vector<std::string> now_guarded = guarded_recvars;
    for (const auto& r : pending_recvars) now_guarded.push_back(r);
    std::vector<std::string> no_pending;
    ProcPtr cont = random_proc_rec(rng, universe, input_ports, size - 1, scope,
                                   now_guarded, no_pending, binder_id);
    return proc_output(universe.ports[rng.below(universe.ports.size())], payload, cont);
  }
  if (pick == 6) {  // tau prefix
    std::vector<std::string> now_guarded = guarded_recvars;
    for (const auto& r : pending_recvars) now_guarded.push_back(r);
    std::vector<std::string> no_pending;
    return proc_tau(random_proc_rec(rng, universe, input_ports, size - 1, scope,
                                    now_guarded, no_pending, binder_id));
  }
  if (pick == 7) {  // let
    std::string binder = "g" + std::to_string(binder_id++);
    ExprPtr bound = random_expr(rng, universe, scope, 1);
    scope.push_back(binder);
    ProcPtr cont = random_proc_rec(rng, universe, input_ports, size - 1, scope,
                                   guarded_recvars, pending_recvars, binder_id);
    scope.pop_back();
    return proc_let(binder, bound, cont);
  }
  if (pick == 8) {  // if (equality conditions only: evaluation stays total)
    CondPtr cond = cond_cmp(rng.chance(50) ? CmpOp::Eq : CmpOp::Neq,
                            random_expr(rng, universe, scope, 0),
                            random_expr(rng, universe, scope, 0));
    int half = size / 2;
    ProcPtr a = random_proc_rec(rng, universe, input_ports, half, scope, guarded_recvars,
                                pending_recvars, binder_id);
    ProcPtr b = random_proc_rec(rng, universe, input_ports, size - 1 - half, scope,
                                guarded_recvars, pending_recvars, binder_id);
    return proc_if(cond, a, b);
  }
  if (pick < 11) {  // choice
    int half = 1 + rng.below(size - 1);
    ProcPtr a = random_proc_rec(rng, universe, input_ports, half, scope, guarded_recvars,
                                pending_recvars, binder_id);
    ProcPtr b = random_proc_rec(rng, universe, input_ports, size - half, scope,
                                guarded_recvars, pending_recvars, binder_id);
    return proc_choice(a, b);
  }
  // rec
  std::string var = "r" + std::to_string(binder_id++);
  pending_recvars.push_back(var);
  ProcPtr body = random_proc_rec(rng, universe, input_ports, size - 1, scope,
                                 guarded_recvars, pending_recvars, binder_id);
  pending_recvars.pop_back();
  return proc_rec(var, body);
}

}  // namespace

ProcPtr random_process(std::uint64_t seed, const Universe& universe,
                       const std::vector<std::string>& input_ports, int size_bound) {
  Rng rng(seed);
  std::vector<std::string> scope, guarded, pending;
  int binder_id = 0;
  const std::vector<std::string>& inputs =
      input_ports.empty() ? universe.ports : input_ports;
  return random_proc_rec(rng, universe, inputs, size_bound, scope, guarded, pending,
                         binder_id);
}

namespace {

FormPtr random_formula_rec(Rng& rng, const Universe& universe, int size,
                           const std::vector<std::string>& fixvars, int& name_id) {
  if (size <= 1) return f_tt();
  bool with_max = size >= 3 && rng.chance(35);
  std::string maxvar;
  std::vector<std::string> inner_fix = fixvars;
  if (with_max) {
    maxvar = "Z" + std::to_string(name_id++);
    inner_fix.push_back(maxvar);
  }

  // Disjoint symbolic actions: pairwise distinct (direction, port) keys.
  std::vector<std::pair<Direction, std::string>> keys;
  for (const auto& p : universe.ports) {
    keys.emplace_back(Direction::In, p);
    keys.emplace_back(Direction::Out, p);
  }
  for (std::size_t i = keys.size(); i > 1; --i)
    std::swap(keys[i - 1], keys[rng.below(static_cast<int>(i))]);
  int nbranch = 1 + rng.below(std::min<int>(3, static_cast<int>(keys.size())));
  int budget = std::max(1, (size - 1) / nbranch);

  std::vector<NecBranch> branches;
  for (int i = 0; i < nbranch; ++i) {
    auto [dir, port] = keys[i];
    std::string pv = "pv" + std::to_string(name_id++);
    Pattern pat;
    pat.dir = dir;
    pat.port = PatPart::binder(pv);
    CondPtr cond = cond_cmp(CmpOp::Eq, expr_var(pv), expr_const(Value::atom(port)));
    std::string dv;
    if (rng.chance(60)) {
      dv = "dv" + std::to_string(name_id++);
      pat.payload = PatPart::binder(dv);
    } else {
      pat.payload = PatPart::dont_care();
    }
    if (dir == Direction::Out && !dv.empty() && rng.chance(40)) {
      const Value& v = universe.values[rng.below(universe.values.size())];
      cond = cond_and(cond, cond_cmp(rng.chance(50) ? CmpOp::Eq : CmpOp::Neq,
                                     expr_var(dv), expr_const(v)));
    }
    FormPtr cont;
    int pick = rng.below(10);
    if (pick < 3) {
      cont = f_ff();
    } else if (pick < 4) {
      cont = f_tt();
    } else if (!inner_fix.empty() && pick < 7) {
      cont = f_fvar(inner_fix[rng.below(inner_fix.size())]);
    } else {
      cont = random_formula_rec(rng, universe, budget, inner_fix, name_id);
    }
    branches.push_back(NecBranch{std::move(pat), std::move(cond), std::move(cont)});
  }
  FormPtr conj = f_conj(std::move(branches));
  if (!with_max) return conj;
  std::set<std::string> free;
  // Keep the fixpoint only when its variable is actually used.
  struct {
    void operator()(const FormPtr& f, std::set<std::string>& out) const {
      if (f->kind == Formula::Kind::FVar) out.insert(f->var);
      if (f->kind == Formula::Kind::Max) (*this)(f->body, out);
      if (f->kind == Formula::Kind::Conj)
        for (const auto& b : f->branches) (*this)(b.cont, out);
    }
  } collect;
  collect(conj, free);
  if (!free.count(maxvar)) return conj;
  return f_max(maxvar, conj);
}

}  // namespace

FormPtr random_formula_nf(std::uint64_t seed, const Universe& universe, int size_bound) {
  Rng rng(seed);
  int name_id = 0;
  return random_formula_rec(rng, universe, size_bound, {}, name_id);
}

ExplicitTrace random_trace(std::uint64_t seed, const ProcPtr& p, const Universe& universe,
                           int max_visible) {
  Rng rng(seed);
  ExplicitTrace out;
  ProcPtr cur = p;
  int visible = 0;
  int steps = 0;
  while (visible < max_visible && steps < 4 * max_visible + 8) {
    auto succ = step(cur, universe);
    if (succ.empty()) break;
    const auto& [u, q] = succ[rng.below(static_cast<int>(succ.size()))];
    out.push_back(u);
    if (!u.is_tau()) ++visible;
    cur = q;
    ++steps;
  }
  return out;
}

}  // namespace bienforce
