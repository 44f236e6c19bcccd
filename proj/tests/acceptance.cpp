// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion pins its tolerances in code.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "bienforce/analysis.hpp"
#include "bienforce/config.hpp"
#include "bienforce/corpus.hpp"
#include "bienforce/errors.hpp"
#include "bienforce/instrument.hpp"
#include "bienforce/synth.hpp"

#ifndef CORPUS_DIR
#define CORPUS_DIR "corpus"
#endif

using namespace bienforce;

namespace {

struct Check {
  std::ostringstream failures;
  int failed = 0;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failed;
    failures << "\n    - " << what;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<ProcPtr> reference_corpus() {
  return {corpus_process("p_g"), corpus_process("p_bo"), corpus_process("p_bi")};
}

CheckLimits limits_with_depth(int depth) {
  CheckLimits l;
  l.depth = depth;
  return l;
}

bool consecutive_on(const ExplicitTrace& t, Direction dir, const std::string& port) {
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (!t[i].is_tau() && !t[i + 1].is_tau() && t[i].action().dir == dir &&
        t[i + 1].action().dir == dir && t[i].action().port == port &&
        t[i + 1].action().port == port)
      return true;
  return false;
}

// ---------------------------------------------------------------- criteria

void criterion1(Check& c) {
  Universe u = corpus_universe();
  FormPtr phi1 = corpus_formula("phi1");
  auto timed_sat = [&](const char* proc) {
    auto start = Clock::now();
    SatResult r = satisfies(explore_lts(corpus_process(proc), u, 10000), phi1, 10000);
    c.expect(seconds_since(start) < 1.0, std::string("check-sat ") + proc + " under 1 s");
    return r;
  };
  c.expect(timed_sat("p_g").holds, "phi1 holds for p_g");
  SatResult bo = timed_sat("p_bo");
  c.expect(!bo.holds, "phi1 fails for p_bo");
  c.expect(consecutive_on(bo.witness, Direction::Out, "a"),
           "p_bo witness has two consecutive outputs on a");
  SatResult bi = timed_sat("p_bi");
  c.expect(!bi.holds, "phi1 fails for p_bi");
  c.expect(consecutive_on(bi.witness, Direction::In, "a"),
           "p_bi witness has two consecutive inputs on a");
}

void criterion2(Check& c) {
  Universe u = corpus_universe();
  c.expect(composite_step({corpus_monitor("e_d"), corpus_process("p_bi")}, u).empty(),
           "e_d[p_bi] has no transitions");

  CompositeLts bo =
      explore_composite({corpus_monitor("e_d"), corpus_process("p_bo")}, u, 5000);
  bool close_to_nil = false;
  for (const auto& e : bo.succ[bo.initial])
    if (e.action.str() == "b?cls" && process_str(bo.states[e.target].process) == "nil" &&
        monitor_alpha_key(bo.states[e.target].monitor) ==
            monitor_alpha_key(corpus_monitor("e_d")))
      close_to_nil = true;
  c.expect(close_to_nil, "e_d[p_bo] admits b?cls to e_d[nil]");

  CompositeLts det =
      explore_composite({corpus_monitor("e_det"), corpus_process("p_bi")}, u, 10000);
  auto next_state = [&](int from, const std::string& action, InstrRule rule) {
    for (const auto& e : det.succ[from])
      if (e.action.str() == action)
        for (InstrRule r : e.rules)
          if (r == rule) return e.target;
    return -1;
  };
  int s = next_state(det.initial, "a?1", InstrRule::BiTrnI);
  c.expect(s >= 0, "e_det[p_bi] accepts the startup input");
  if (s >= 0) {
    int ins = next_state(s, "tau", InstrRule::BiDisI);
    c.expect(ins >= 0, "the blocked request is replaced by an inserted default (tau)");
    if (ins >= 0) {
      int comp = next_state(ins, "tau", InstrRule::BiAsy);
      c.expect(comp >= 0, "the internal computation step remains silent");
      if (comp >= 0) {
        int ans = next_state(comp, "a!ans(vdef)", InstrRule::BiTrnO);
        c.expect(ans >= 0, "the answer to the default request goes out");
        if (ans >= 0)
          c.expect(next_state(ans, "b!<vdef, ans(vdef)>", InstrRule::BiDef) >= 0,
                   "the log of the default pair goes out");
      }
    }
  }
}

void criterion3(Check& c) {
  Universe u = corpus_universe();
  FormPtr phi1 = corpus_formula("phi1");
  auto corpus = reference_corpus();
  CheckLimits limits = limits_with_depth(6);

  Verdict snd_e = check_soundness(corpus_monitor("e_e"), phi1,
                                  {corpus_process("p_bo"), corpus_process("p_bi")}, u,
                                  limits);
  c.expect(snd_e.status == VerdictStatus::FailsWithWitness,
           "soundness fails for e_e on {p_bo, p_bi}");
  for (const char* mon : {"e_a", "e_d", "e_dt", "e_det"})
    c.expect(check_soundness(corpus_monitor(mon), phi1, corpus, u, limits).status ==
                 VerdictStatus::Holds,
             std::string("soundness holds for ") + mon);

  Verdict tr_d = check_transparency(corpus_monitor("e_d"), phi1, corpus, u, limits);
  c.expect(tr_d.status == VerdictStatus::FailsWithWitness, "transparency fails for e_d");
  c.expect(tr_d.description.find("#0") != std::string::npos,
           "e_d transparency witness is p_g");
  Verdict tr_a = check_transparency(corpus_monitor("e_a"), phi1, corpus, u, limits);
  c.expect(tr_a.status == VerdictStatus::FailsWithWitness, "transparency fails for e_a");
  c.expect(tr_a.description.find("#0") != std::string::npos,
           "e_a transparency witness is p_g");
  for (const char* mon : {"e_dt", "e_det"})
    c.expect(check_transparency(corpus_monitor(mon), phi1, corpus, u, limits).status ==
                 VerdictStatus::Holds,
             std::string("transparency holds for ") + mon);

  Verdict evt_dt =
      check_eventual_transparency(corpus_monitor("e_dt"), phi1, corpus, u, limits);
  c.expect(evt_dt.status == VerdictStatus::FailsWithWitness,
           "eventual transparency fails for e_dt");
  c.expect(evt_dt.description.find("#1") != std::string::npos,
           "e_dt failure witnessed via p_bo");
  c.expect(evt_dt.description.find("(b?(_)). q + ((_)!(_), .). q") != std::string::npos,
           "e_dt failure reaches the coarse residual monitor");
  c.expect(check_eventual_transparency(corpus_monitor("e_det"), phi1, corpus, u,
                                       limits)
                   .status == VerdictStatus::Holds,
           "eventual transparency holds for e_det at depth 6");
}

void criterion4(Check& c) {
  Universe u = corpus_universe();
  SynthesisConfig cfg{{"b", "c"}, corpus_default_value()};
  TrnPtr mon = synthesize(corpus_formula("phi1"), cfg, u);
  std::string text = monitor_str(mon) + "\n";
  c.expect(text == read_file(std::string(CORPUS_DIR) + "/golden/phi1_bc.mon"),
           "synthesized monitor matches the checked-in golden term");

  std::string body = monitor_str(mon);
  c.expect(body.find("(., b = x, b?vdef)") != std::string::npos &&
               body.find("(., c = x, c?vdef)") != std::string::npos,
           "exactly the two insertion branches for ports b and c");
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = body.find("(., ", pos)) != std::string::npos; ++pos)
    ++count;
  c.expect(count == 2, "no further insertion branches");
  c.expect(body.find("!(x_d0 = x)") != std::string::npos &&
               body.find("!(x_d1 != b)") != std::string::npos,
           "both negated-condition default branches present");

  TrnPtr simplified = simplify_monitor(mon);
  std::string simp_text = monitor_str(simplified) + "\n";
  c.expect(simp_text ==
               read_file(std::string(CORPUS_DIR) + "/golden/phi1_bc_simplified.mon"),
           "--simplify output matches its golden term");
  c.expect(mon->kind == Transducer::Kind::Rec &&
               mon->body->kind == Transducer::Kind::Rec &&
               simplified->kind == Transducer::Kind::Rec &&
               simplified->body->kind != Transducer::Kind::Rec,
           "the redundant recursion wrapper is removed by simplification");
}

void criterion5(Check& c) {
  auto start = Clock::now();
  Universe u{{"a", "b", "c"}, {Value::integer(1), Value::integer(2), Value::atom("vdef")}};
  SynthesisConfig cfg{u.ports, Value::atom("vdef")};
  CheckLimits limits = limits_with_depth(6);
  int failures = 0, inconclusive = 0;
  const int pairs = 500;
  for (int i = 0; i < pairs; ++i) {
    std::uint64_t seed = static_cast<std::uint64_t>(i);
    FormPtr f = random_formula_nf(seed, u, 1 + static_cast<int>(seed % 6));
    ProcPtr p = random_process(seed + 90000, u, u.ports, 1 + static_cast<int>(seed % 6));
    try {
      TrnPtr mon = synthesize(f, cfg, u);
      Verdict snd = check_soundness(mon, f, {p}, u, limits);
      Verdict evt = check_eventual_transparency(mon, f, {p}, u, limits);
      for (const Verdict* v : {&snd, &evt}) {
        if (v->status == VerdictStatus::FailsWithWitness) ++failures;
        if (v->status == VerdictStatus::InconclusiveAtBound) ++inconclusive;
      }
    } catch (const BoundError&) {
      ++inconclusive;
    }
  }
  c.expect(failures == 0, "no soundness/eventual-transparency failures (got " +
                              std::to_string(failures) + ")");
  c.expect(inconclusive * 50 <= pairs,  // at most 2%
           "inconclusive on at most 2% of pairs (got " + std::to_string(inconclusive) +
               ")");
  c.expect(seconds_since(start) < 300.0, "property suite under 5 minutes");
}

void criterion6(Check& c) {
  Universe u = corpus_universe();
  ExplicitTrace t0 = corpus_trace("t0");
  auto mc = [&](const char* mon) {
    McResult r = modification_count(corpus_monitor(mon), t0, u, 256);
    return r.divergent ? -1 : r.count;
  };
  c.expect(mc("e_e") == 3, "mc(e_e, t0) = 3");
  c.expect(mc("e_a") == 4, "mc(e_a, t0) = 4");
  c.expect(mc("e_d") == 5, "mc(e_d, t0) = 5");
  c.expect(mc("e_dt") == 4, "mc(e_dt, t0) = 4");
  c.expect(mc("e_det") == 2, "mc(e_det, t0) = 2");
}

void criterion7(Check& c) {
  using S = std::set<Capability>;
  c.expect(etp(corpus_monitor("e_e")) == S{Capability::En}, "etp(e_e) = {en}");
  c.expect(etp(corpus_monitor("e_a")) == S{Capability::Adpt}, "etp(e_a) = {adpt}");
  c.expect(etp(corpus_monitor("e_d")) == S{Capability::Dis}, "etp(e_d) = {dis}");
  c.expect(etp(corpus_monitor("e_dt")) == S{Capability::Dis}, "etp(e_dt) = {dis}");
  c.expect(etp(corpus_monitor("e_det")) == S{Capability::Dis}, "etp(e_det) = {dis}");
  TrnPtr both = parse_monitor("rec x. ((x1)?(y), .). x + ((x2)!(y), .). x");
  c.expect(etp(both) == S{Capability::En, Capability::Dis},
           "two-branch suppression example yields {en, dis}");
}

void criterion8(Check& c) {
  Universe u = corpus_universe();
  McResult r1 = modification_count(corpus_monitor("e_1"), corpus_trace("t3"), u, 256);
  c.expect(!r1.divergent && r1.count == 1, "mc(e_1, t3) = 1");
  // t3c ends in a two-visible-action suffix, so the blocked run scores 2 + 2.
  McResult r2 = modification_count(corpus_monitor("e_1"), corpus_trace("t3c"), u, 256);
  c.expect(!r2.divergent && r2.count == 4, "mc(e_1, t3 with c) = 2 + |t''| = 4");
  McResult r3 = modification_count(corpus_monitor("e_2"), corpus_trace("t3c"), u, 256);
  c.expect(!r3.divergent && r3.count == 1, "mc(e_2, t3 with c) = 1");
}

void criterion9(Check& c) {
  Universe u = corpus_universe();
  int violations = 0;

  // phi1 against its hand-written competitors on corpus-system runs.
  {
    FormPtr phi1 = corpus_formula("phi1");
    TrnPtr synth_mon =
        synthesize(phi1, SynthesisConfig{{"a", "b"}, corpus_default_value()}, u);
    std::vector<ProcPtr> systems = reference_corpus();
    for (int i = 0; i < 100; ++i) {
      ProcPtr p = systems[i % systems.size()];
      ExplicitTrace t = random_trace(static_cast<std::uint64_t>(i), p, u, 6);
      McResult mine = modification_count(synth_mon, t, u, 512);
      for (const char* competitor : {"e_det", "e_dt"}) {
        McResult theirs =
            modification_count(corpus_monitor(competitor), t, u, 512);
        bool ok = !mine.divergent &&
                  (theirs.divergent || mine.count <= theirs.count);
        if (!ok) ++violations;
      }
    }
  }

  // phi2 against e_1 (ports {a,b}) and e_2 (ports {a,b,c}) on generated
  // systems whose input ports stay inside the respective set.
  {
    FormPtr phi2 = corpus_formula("phi2");
    struct Setup {
      std::vector<std::string> ports;
      const char* competitor;
    };
    for (const Setup& setup :
         {Setup{{"a", "b"}, "e_1"}, Setup{{"a", "b", "c"}, "e_2"}}) {
      TrnPtr synth_mon =
          synthesize(phi2, SynthesisConfig{setup.ports, corpus_default_value()}, u);
      TrnPtr competitor = corpus_monitor(setup.competitor);
      for (int i = 0; i < 100; ++i) {
        ProcPtr p =
            random_process(static_cast<std::uint64_t>(i) + 777, u, setup.ports, 6);
        ExplicitTrace t = random_trace(static_cast<std::uint64_t>(i), p, u, 6);
        McResult mine = modification_count(synth_mon, t, u, 512);
        McResult theirs = modification_count(competitor, t, u, 512);
        bool ok =
            !mine.divergent && (theirs.divergent || mine.count <= theirs.count);
        if (!ok) ++violations;
      }
    }
  }
  c.expect(violations == 0,
           "synthesized monitors never more intrusive (violations: " +
               std::to_string(violations) + ")");
}

void criterion10(Check& c) {
  Universe u{{"a", "b"}, {Value::integer(1), Value::integer(2)}};

  int neutrality_failures = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ProcPtr p = random_process(seed, u, u.ports, 6);
    Lts plain = explore_lts(p, u, 10000);
    CompositeLts composed = explore_composite({identity_monitor(), p}, u, 10000);
    if (!bisimilar(composed.to_lts(), plain).bisimilar) ++neutrality_failures;
  }
  c.expect(neutrality_failures == 0, "id[p] ~ p on 200 seeded processes (failures: " +
                                         std::to_string(neutrality_failures) + ")");

  int after_failures = 0, instances = 0;
  for (std::uint64_t seed = 0; instances < 200 && seed < 8000; ++seed) {
    ProcPtr p = random_process(seed, u, u.ports, 6);
    FormPtr f = random_formula_nf(seed + 30000, u, 5);
    Lts lts = explore_lts(p, u, 10000);
    if (!satisfies(lts, f).holds) continue;
    // Pick the seed-determined weak visible step, when one exists.
    std::set<int> closure{lts.initial};
    std::vector<int> frontier{lts.initial};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int s : frontier)
        for (const auto& [act, q] : lts.succ[s])
          if (act.is_tau() && closure.insert(q).second) next.push_back(q);
      frontier = std::move(next);
    }
    std::vector<std::pair<Action, int>> weak;
    for (int s : closure)
      for (const auto& [act, q] : lts.succ[s])
        if (!act.is_tau()) weak.emplace_back(act.action(), q);
    if (weak.empty()) continue;
    ++instances;
    const auto& [alpha, q] = weak[seed % weak.size()];
    Lts rooted = lts;
    rooted.initial = q;
    if (!satisfies(rooted, after(f, ExplicitAction::visible(alpha))).holds)
      ++after_failures;
  }
  c.expect(instances >= 200, "found 200 satisfying instances with a weak step");
  c.expect(after_failures == 0,
           "satisfaction preserved along after (failures: " +
               std::to_string(after_failures) + ")");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<void(Check&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "satisfaction verdicts for the three servers", criterion1},
      {2, "instrumentation traces of the disabling monitors", criterion2},
      {3, "adequacy verdicts (soundness/transparency/eventual transparency)",
       criterion3},
      {4, "synthesis golden term for phi1 with ports {b, c}", criterion4},
      {5, "synthesized monitors enforce 500 random instances", criterion5},
      {6, "modification-count table on the reference run", criterion6},
      {7, "enforcement capability values", criterion7},
      {8, "port sensitivity of the insertion branches", criterion8},
      {9, "synthesized monitors are never more intrusive", criterion9},
      {10, "identity neutrality and preservation along after", criterion10},
  };
  int failed_criteria = 0;
  for (const auto& criterion : criteria) {
    Check check;
    auto start = Clock::now();
    try {
      criterion.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("unexpected exception: ") + e.what());
    }
    double secs = seconds_since(start);
    if (check.failed == 0) {
      std::printf("PASS  criterion %2d: %s (%.2fs)\n", criterion.id, criterion.title,
                  secs);
    } else {
      ++failed_criteria;
      std::printf("FAIL  criterion %2d: %s (%.2fs)%s\n", criterion.id, criterion.title,
                  secs, check.failures.str().c_str());
    }
  }
  if (failed_criteria) std::printf("%d criterion(s) failed\n", failed_criteria);
  return failed_criteria == 0 ? 0 : 1;
}
