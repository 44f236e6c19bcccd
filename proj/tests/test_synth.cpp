#include <doctest.h>

#include <deque>

#include "bienforce/analysis.hpp"
#include "bienforce/corpus.hpp"
#include "bienforce/errors.hpp"
#include "bienforce/synth.hpp"

using namespace bienforce;

namespace {

SynthesisConfig cfg_with(std::vector<std::string> ports) {
  return SynthesisConfig{std::move(ports), corpus_default_value()};
}

int count_insertions(const TrnPtr& e) {
  switch (e->kind) {
    case Transducer::Kind::Prefix:
      return (e->pat_is_dot ? 1 : 0) + count_insertions(e->cont);
    case Transducer::Kind::Sum: {
      int n = 0;
      for (const auto& b : e->branches) n += count_insertions(b);
      return n;
    }
    case Transducer::Kind::Rec:
      return count_insertions(e->body);
    case Transducer::Kind::TVar:
      return 0;
  }
  return 0;
}

}  // namespace

TEST_CASE("tt and ff synthesize to the identity monitor") {
  Universe u = corpus_universe();
  CHECK(is_identity_term(synthesize(f_tt(), cfg_with({"a"}), u)));
  CHECK(is_identity_term(synthesize(f_ff(), cfg_with({"a"}), u)));
}

TEST_CASE("dis: suppression for outputs, insertion sum for inputs") {
  SynthesisConfig cfg = cfg_with({"a"});
  Pattern out_pat{Direction::Out, PatPart::binder("x3"), PatPart::dont_care()};
  CondPtr c3 = cond_cmp(CmpOp::Eq, expr_var("x3"), expr_var("x"));
  TrnPtr d1 = dis_branch(out_pat, c3, t_tvar("y"), cfg);
  REQUIRE(d1->kind == Transducer::Kind::Prefix);
  CHECK(d1->tact.kind == TransformAction::Kind::Dot);
  CHECK(cond_str(d1->cond) == "x3 = x");
  CHECK(d1->cont->var == "y");

  Pattern in_pat{Direction::In, PatPart::binder("x1"), PatPart::dont_care()};
  CondPtr c1 = cond_cmp(CmpOp::Eq, expr_var("x1"), expr_var("x"));
  TrnPtr d2 = dis_branch(in_pat, c1, t_tvar("y"), cfg);
  REQUIRE(d2->kind == Transducer::Kind::Prefix);
  CHECK(d2->pat_is_dot);
  CHECK(cond_str(d2->cond) == "a = x");
  CHECK(d2->tact.kind == TransformAction::Kind::Template);
  CHECK(d2->tact.dir == Direction::In);
  CHECK(expr_str(d2->tact.payload) == "vdef");

  // A false condition leaves insertion branches that can never fire.
  TrnPtr d3 = dis_branch(in_pat, cond_false(), t_tvar("y"), cfg);
  CHECK(insertions_of(t_rec("y", t_sum({d3, t_prefix(out_pat, cond_true(),
                                                     TransformAction::replay(),
                                                     t_tvar("y"))}))).empty());
}

TEST_CASE("default branch: catch-all and negated input conditions") {
  FormPtr outputs_only = parse_formula("[(x1)!(_), x1 = a] ff & [(x2)!(_), x2 = b] tt");
  TrnPtr d = default_branch(outputs_only);
  CHECK(monitor_str(d) == "((x_d)?(y_d)). id");

  FormPtr phi1 = corpus_formula("phi1");
  TrnPtr top_default = default_branch(phi1->body);
  CHECK(monitor_str(top_default) == "((x_d)?(_), !(x_d != b)). id");

  // The inner conjunction: input condition x1 = x.
  const FormPtr& inner = phi1->body->branches[0].cont;
  TrnPtr inner_default = default_branch(inner);
  CHECK(monitor_str(inner_default) == "((x_d)?(_), !(x_d = x)). id");
}

TEST_CASE("synthesis golden: the full property with ports {b, c}") {
  Universe u = corpus_universe();
  TrnPtr mon = synthesize(corpus_formula("phi1"), cfg_with({"b", "c"}), u);
  CHECK(count_insertions(mon) == 2);
  std::string text = monitor_str(mon);
  CHECK(text.find("(., b = x, b?vdef)") != std::string::npos);
  CHECK(text.find("(., c = x, c?vdef)") != std::string::npos);
  CHECK(text.find("!(x_d0 = x)") != std::string::npos);
  CHECK(text.find("!(x_d1 != b)") != std::string::npos);
  // The mechanical double-rec wrapper is present until simplified away.
  REQUIRE(mon->kind == Transducer::Kind::Rec);
  CHECK(mon->body->kind == Transducer::Kind::Rec);
  TrnPtr simplified = simplify_monitor(mon);
  REQUIRE(simplified->kind == Transducer::Kind::Rec);
  CHECK(simplified->body->kind == Transducer::Kind::Sum);
  // Reparse and compare: the emitted text is the term.
  CHECK(monitor_alpha_key(parse_monitor(text)) == monitor_alpha_key(mon));
}

TEST_CASE("a wider port set adds one insertion branch per port") {
  Universe u = corpus_universe();
  CHECK(count_insertions(synthesize(corpus_formula("phi1"), cfg_with({"b"}), u)) == 1);
  CHECK(count_insertions(synthesize(corpus_formula("phi1"), cfg_with({"a", "b", "c"}), u)) ==
        3);
}

TEST_CASE("synthesis rejects non-normal-form input") {
  Universe u = corpus_universe();
  u.values.push_back(Value::integer(3));
  u.values.push_back(Value::integer(4));
  CHECK_THROWS_WITH_AS(synthesize(corpus_formula("phi3"), cfg_with({"a"}), u),
                       doctest::Contains("a!4"), Error);
}

TEST_CASE("synthesized monitors only disable") {
  Universe u{{"a", "b"}, {Value::integer(1), Value::integer(2)}};
  SynthesisConfig cfg{{"a", "b"}, Value::integer(1)};
  std::set<Capability> dis_only{Capability::Dis};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    FormPtr f = random_formula_nf(seed, u, 6);
    std::set<Capability> caps = etp(synthesize(f, cfg, u));
    CHECK(std::includes(dis_only.begin(), dis_only.end(), caps.begin(), caps.end()));
  }
}

namespace {

// The composite's monitor always equals the synthesis of the residual
// formula up to unfolding of the leading recursion chain: firing a prefix
// necessarily unfolds the enclosing recursions first, so states reached
// through insertion/suppression loops carry an unfolded wrapper.
bool matches_residual_synthesis(const TrnPtr& evolved, TrnPtr synthesized) {
  std::string key = monitor_alpha_key(evolved);
  for (;;) {
    if (key == monitor_alpha_key(synthesized)) return true;
    if (synthesized->kind != Transducer::Kind::Rec) return false;
    synthesized = unfold_rec(synthesized);
  }
}

}  // namespace

TEST_CASE("every reachable monitor state is the synthesis of the residual formula") {
  Universe u = corpus_universe();
  SynthesisConfig cfg = cfg_with({"a", "b"});
  FormPtr phi1 = corpus_formula("phi1");
  for (const char* proc : {"p_g", "p_bo", "p_bi"}) {
    TrnPtr mon = synthesize(phi1, cfg, u);
    CompositeLts c = explore_composite({mon, corpus_process(proc)}, u, 10000);
    // BFS over (state, residual formula) pairs, tau edges keep the residual.
    std::set<std::string> seen;
    std::deque<std::pair<int, FormPtr>> work;
    work.emplace_back(c.initial, phi1);
    seen.insert(std::to_string(c.initial) + "|" + formula_key(phi1));
    int checked = 0;
    while (!work.empty()) {
      auto [state, residual] = work.front();
      work.pop_front();
      CHECK(matches_residual_synthesis(c.states[state].monitor,
                                       synthesize(residual, cfg, u)));
      ++checked;
      for (const auto& e : c.succ[state]) {
        FormPtr next = e.action.is_tau() ? residual : after(residual, e.action);
        std::string key = std::to_string(e.target) + "|" + formula_key(next);
        if (seen.insert(key).second) work.emplace_back(e.target, next);
      }
    }
    CHECK(checked > 1);
  }
}

TEST_CASE("residual synthesis correspondence on random instances") {
  Universe u{{"a", "b", "c"},
             {Value::integer(1), Value::integer(2), Value::atom("vdef")}};
  SynthesisConfig cfg{u.ports, Value::atom("vdef")};
  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    FormPtr f = random_formula_nf(seed, u, 2 + static_cast<int>(seed % 7));
    ProcPtr p = random_process(seed + 500000, u, u.ports, 2 + static_cast<int>(seed % 7));
    TrnPtr mon = synthesize(f, cfg, u);
    CompositeLts c = explore_composite({mon, p}, u, 10000);
    int state = c.initial;
    FormPtr residual = f;
    for (int k = 0; k < 5 && !c.succ[state].empty(); ++k) {
      const auto& e = c.succ[state][seed % c.succ[state].size()];
      if (!e.action.is_tau()) residual = after(residual, e.action);
      state = e.target;
      if (!matches_residual_synthesis(c.states[state].monitor,
                                      synthesize(residual, cfg, u)))
        ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("synthesized monitors adequately enforce on the reference corpus") {
  Universe u = corpus_universe();
  FormPtr phi1 = corpus_formula("phi1");
  TrnPtr mon = synthesize(phi1, cfg_with({"a", "b"}), u);
  std::vector<ProcPtr> corpus = {corpus_process("p_g"), corpus_process("p_bo"),
                                 corpus_process("p_bi")};
  CheckLimits limits;
  limits.depth = 6;
  CHECK(check_soundness(mon, phi1, corpus, u, limits).status == VerdictStatus::Holds);
  CHECK(check_transparency(mon, phi1, corpus, u, limits).status ==
        VerdictStatus::Holds);
  CHECK(check_eventual_transparency(mon, phi1, corpus, u, limits).status ==
        VerdictStatus::Holds);
}
