// bienforce: a workbench for synthesizing and analysing bidirectional
// runtime-enforcement monitors over value-passing processes.

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bienforce/analysis.hpp"
#include "bienforce/config.hpp"
#include "bienforce/corpus.hpp"
#include "bienforce/errors.hpp"
#include "bienforce/formula.hpp"
#include "bienforce/instrument.hpp"
#include "bienforce/monitor.hpp"
#include "bienforce/process.hpp"
#include "bienforce/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bienforce;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> ports;     // synthesis port set override
  std::string default_value_text;
  int depth = -1;
  bool json_output = false;
};

Config make_config(const CommonOpts& opts) {
  Config cfg = opts.config_path.empty() ? Config{} : load_config_file(opts.config_path);
  if (!opts.default_value_text.empty())
    cfg.default_value = parse_value(opts.default_value_text);
  if (opts.depth > 0) cfg.depth = opts.depth;
  return cfg;
}

std::vector<std::string> synth_ports(const CommonOpts& opts, const Config& cfg) {
  return opts.ports.empty() ? cfg.universe.ports : opts.ports;
}

CheckLimits limits_of(const Config& cfg) {
  CheckLimits l;
  l.state_bound = cfg.state_bound;
  l.closure_bound = cfg.state_bound;
  l.tau_bound = cfg.tau_bound;
  l.step_bound = cfg.step_bound;
  l.depth = cfg.depth;
  return l;
}

// Named corpus entries and inline terms are accepted wherever a file path is
// expected: first an existing file, then the built-in library, then the
// argument itself as source text.
std::string slurp(const std::string& path_or_name, const std::string& kind) {
  if (fs::exists(path_or_name)) return read_file(path_or_name);
  for (const auto& a : corpus_artifacts())
    if (a.name == path_or_name && a.kind == kind) return a.text;
  return path_or_name;
}

json witness_json(const ExplicitTrace& t) {
  json arr = json::array();
  for (const auto& u : t) arr.push_back(u.str());
  return arr;
}

json verdict_json(const std::string& check, const Verdict& v) {
  json j;
  j["check"] = check;
  j["status"] = verdict_status_str(v.status);
  if (v.status == VerdictStatus::FailsWithWitness && !v.witness.empty())
    j["witness"] = witness_json(v.witness);
  if (!v.description.empty()) j["description"] = v.description;
  if (!v.note.empty()) j["note"] = v.note;
  j["bound"] = v.bound;
  return j;
}

void print_verdict(const std::string& check, const Verdict& v, bool as_json) {
  if (as_json) {
    std::cout << verdict_json(check, v).dump(2) << "\n";
    return;
  }
  std::cout << check << ": " << verdict_status_str(v.status) << "\n";
  if (!v.witness.empty()) std::cout << "  witness: " << trace_str(v.witness) << "\n";
  if (!v.description.empty()) std::cout << "  " << v.description << "\n";
  if (!v.note.empty()) std::cout << "  note: " << v.note << "\n";
}

std::vector<ProcPtr> load_corpus_dir(const std::string& dir) {
  std::vector<std::pair<std::string, ProcPtr>> named;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".proc") continue;
    named.emplace_back(entry.path().filename().string(),
                       parse_process(read_file(entry.path().string())));
  }
  std::sort(named.begin(), named.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ProcPtr> out;
  for (auto& [name, p] : named) out.push_back(std::move(p));
  return out;
}

json mc_json(const McResult& r) {
  json j;
  if (r.divergent) {
    j["count"] = "divergent";
  } else {
    j["count"] = r.count;
  }
  json deriv = json::array();
  for (const auto& e : r.derivation) {
    json entry;
    entry["clause"] = e.clause;
    if (!e.rule.empty()) entry["rule"] = e.rule;
    if (e.consumed) entry["consumed"] = e.consumed->str();
    if (e.emitted) entry["emitted"] = e.emitted->str();
    if (e.clause == "blocked") entry["residual"] = e.residual;
    deriv.push_back(entry);
  }
  j["derivation"] = deriv;
  return j;
}

void print_mc(const McResult& r, bool as_json) {
  if (as_json) {
    json j = mc_json(r);
    j["check"] = "mc";
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (r.divergent) {
    std::cout << "mc: divergent (insertion loop)\n";
    return;
  }
  std::cout << "mc: " << r.count << "\n";
  for (const auto& e : r.derivation) {
    std::cout << "  " << e.clause;
    if (!e.rule.empty()) std::cout << " [" << e.rule << "]";
    if (e.consumed) std::cout << " consumed " << e.consumed->str();
    if (e.emitted) std::cout << " emitted " << e.emitted->str();
    if (e.clause == "blocked") std::cout << " residual " << e.residual;
    std::cout << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"bidirectional runtime-enforcement workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonOpts opts;
  app.add_option("--config", opts.config_path, "configuration file (key = value lines)");
  app.add_option("--ports", opts.ports, "synthesis input-port set")->delimiter(',');
  app.add_option("--default-value", opts.default_value_text,
                 "default payload inserted to unblock the system");
  app.add_option("--depth", opts.depth, "visible-depth bound for eventual transparency");
  app.add_flag("--json", opts.json_output, "machine-readable output");

  std::string formula_file, process_file, monitor_file, trace_file, corpus_dir;
  std::string second_file, reference_file, traces_dir;
  std::string monitor_a, monitor_b;
  bool simplify = false;
  std::vector<int> script;

  auto* check_sat = app.add_subcommand("check-sat", "does a process satisfy a formula?");
  check_sat->add_option("formula", formula_file)->required();
  check_sat->add_option("process", process_file)->required();

  auto* nf_check = app.add_subcommand("nf-check", "normal-form diagnostics for a formula");
  nf_check->add_option("formula", formula_file)->required();

  auto* synth_cmd = app.add_subcommand("synth", "synthesize a disabling monitor");
  synth_cmd->add_option("formula", formula_file)->required();
  synth_cmd->add_flag("--simplify", simplify, "drop recursion binders that are never used");

  auto* simulate = app.add_subcommand("simulate", "replay a monitored system");
  simulate->add_option("monitor", monitor_file)->required();
  simulate->add_option("process", process_file)->required();
  simulate->add_option("--script", script, "transition indices to follow")->delimiter(',');

  auto* verify = app.add_subcommand(
      "verify", "soundness, transparency, eventual transparency over a corpus");
  verify->add_option("monitor", monitor_file)->required();
  verify->add_option("formula", formula_file)->required();
  verify->add_option("corpus", corpus_dir, "directory of .proc files")->required();

  auto* mc_cmd = app.add_subcommand("mc", "modification count of a monitor on a trace");
  mc_cmd->add_option("monitor", monitor_file)->required();
  mc_cmd->add_option("trace", trace_file)->required();

  auto* etp_cmd = app.add_subcommand("etp", "enforcement capabilities of a monitor");
  etp_cmd->add_option("monitor", monitor_file)->required();

  auto* bisim_cmd = app.add_subcommand("bisim", "strong bisimilarity of two systems");
  bisim_cmd->add_option("left", process_file)->required();
  bisim_cmd->add_option("right", second_file)->required();
  bisim_cmd->add_option("--monitor-left", monitor_a, "instrument the left process");
  bisim_cmd->add_option("--monitor-right", monitor_b, "instrument the right process");

  auto* compare = app.add_subcommand("compare", "per-trace intrusiveness comparison");
  compare->add_option("candidate", monitor_file)->required();
  compare->add_option("reference", reference_file)->required();
  compare->add_option("formula", formula_file)->required();
  compare->add_option("traces", traces_dir, "directory of .tr files")->required();

  auto* export_dot = app.add_subcommand("export-dot", "DOT/JSON export of an LTS");
  export_dot->add_option("process", process_file)->required();
  export_dot->add_option("--monitor", monitor_file, "export the composite e[p]");

  CLI11_PARSE(app, argc, argv);
  Config cfg = make_config(opts);
  CheckLimits limits = limits_of(cfg);

  if (check_sat->parsed()) {
    FormPtr f = parse_formula(slurp(formula_file, "formula"));
    ProcPtr p = parse_process(slurp(process_file, "process"));
    SatResult r = satisfies(explore_lts(p, cfg.universe, cfg.state_bound), f,
                            cfg.state_bound);
    if (opts.json_output) {
      json j{{"check", "check-sat"}, {"status", r.holds ? "Holds" : "Fails"}};
      if (!r.holds) j["witness"] = witness_json(r.witness);
      std::cout << j.dump(2) << "\n";
    } else if (r.holds) {
      std::cout << "Holds\n";
    } else {
      std::cout << "Fails\n  witness: " << trace_str(r.witness) << "\n";
    }
    return r.holds ? 0 : 1;
  }

  if (nf_check->parsed()) {
    FormPtr f = parse_formula(slurp(formula_file, "formula"));
    NfDiagnostics d = is_normal_form(f, cfg.universe);
    if (opts.json_output) {
      json j{{"check", "nf-check"}, {"status", d.normal ? "Holds" : "Fails"}};
      if (!d.normal) {
        j["clause"] = d.clause;
        j["detail"] = d.detail;
        if (d.witness) j["witness"] = d.witness->str();
      }
      std::cout << j.dump(2) << "\n";
    } else if (d.normal) {
      std::cout << "normal form\n";
    } else {
      std::cout << "not normal form: " << d.clause << "\n  " << d.detail << "\n";
      if (d.witness) std::cout << "  witness action: " << d.witness->str() << "\n";
    }
    return d.normal ? 0 : 1;
  }

  if (synth_cmd->parsed()) {
    FormPtr f = parse_formula(slurp(formula_file, "formula"));
    SynthesisConfig scfg{synth_ports(opts, cfg), cfg.default_value};
    TrnPtr mon = synthesize(f, scfg, cfg.universe);
    if (simplify) mon = simplify_monitor(mon);
    std::cout << monitor_str(mon) << "\n";
    return 0;
  }

  if (simulate->parsed()) {
    TrnPtr mon = parse_monitor(slurp(monitor_file, "monitor"));
    ProcPtr p = parse_process(slurp(process_file, "process"));
    CompositeState state{mon, p};
    ExplicitTrace emitted;
    json steps_log = json::array();
    std::size_t step_index = 0;
    for (;; ++step_index) {
      auto steps = composite_step(state, cfg.universe);
      if (steps.empty()) break;
      if (!opts.json_output) {
        std::cout << "step " << step_index + 1 << ": " << steps.size()
                  << " enabled transition(s)\n";
        for (std::size_t i = 0; i < steps.size(); ++i) {
          std::cout << "  [" << i << "] " << steps[i].action.str() << " (";
          for (std::size_t k = 0; k < steps[i].rules.size(); ++k)
            std::cout << (k ? "," : "") << rule_str(steps[i].rules[k]);
          std::cout << ")\n";
        }
      }
      std::size_t pick = 0;
      if (step_index < script.size()) {
        if (script[step_index] < 0 ||
            script[step_index] >= static_cast<int>(steps.size()))
          throw Error("ScriptError",
                      "script index " + std::to_string(script[step_index]) +
                          " out of range at step " + std::to_string(step_index + 1));
        pick = static_cast<std::size_t>(script[step_index]);
      } else if (step_index >= script.size() && !script.empty()) {
        break;  // script exhausted: stop the replay
      }
      const auto& chosen = steps[pick];
      if (opts.json_output) {
        json enabled = json::array();
        for (const auto& s : steps) enabled.push_back(s.action.str());
        steps_log.push_back({{"enabled", enabled},
                             {"chosen", pick},
                             {"action", chosen.action.str()}});
      } else {
        std::cout << "  chosen: [" << pick << "] " << chosen.action.str() << "\n";
      }
      emitted.push_back(chosen.action);
      state = chosen.target;
      if (script.empty() && step_index >= 63) break;  // unscripted replays stop early
    }
    if (opts.json_output) {
      json j{{"check", "simulate"},
             {"trace", witness_json(emitted)},
             {"final", state.str()},
             {"steps", steps_log}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "trace: " << (emitted.empty() ? "(empty)" : trace_str(emitted))
                << "\nfinal: " << state.str() << "\n";
    }
    return 0;
  }

  if (verify->parsed()) {
    TrnPtr mon = parse_monitor(slurp(monitor_file, "monitor"));
    FormPtr f = parse_formula(slurp(formula_file, "formula"));
    std::vector<ProcPtr> corpus = load_corpus_dir(corpus_dir);
    Verdict snd = check_soundness(mon, f, corpus, cfg.universe, limits);
    Verdict trn = check_transparency(mon, f, corpus, cfg.universe, limits);
    Verdict evt = check_eventual_transparency(mon, f, corpus, cfg.universe, limits);
    if (opts.json_output) {
      json j = json::array({verdict_json("soundness", snd),
                            verdict_json("transparency", trn),
                            verdict_json("eventual-transparency", evt)});
      std::cout << j.dump(2) << "\n";
    } else {
      print_verdict("soundness", snd, false);
      print_verdict("transparency", trn, false);
      print_verdict("eventual-transparency", evt, false);
    }
    bool all = snd.status == VerdictStatus::Holds && trn.status == VerdictStatus::Holds &&
               evt.status == VerdictStatus::Holds;
    return all ? 0 : 1;
  }

  if (mc_cmd->parsed()) {
    TrnPtr mon = parse_monitor(slurp(monitor_file, "monitor"));
    ExplicitTrace t = parse_trace(slurp(trace_file, "trace"));
    McResult r = modification_count(mon, t, cfg.universe, cfg.step_bound);
    print_mc(r, opts.json_output);
    return 0;
  }

  if (etp_cmd->parsed()) {
    TrnPtr mon = parse_monitor(slurp(monitor_file, "monitor"));
    auto caps = etp(mon);
    if (opts.json_output) {
      json arr = json::array();
      for (auto c : caps) arr.push_back(capability_str(c));
      std::cout << json{{"check", "etp"}, {"capabilities", arr}}.dump(2) << "\n";
    } else {
      std::cout << "etp: {";
      bool first = true;
      for (auto c : caps) {
        std::cout << (first ? "" : ", ") << capability_str(c);
        first = false;
      }
      std::cout << "}\n";
    }
    return 0;
  }

  if (bisim_cmd->parsed()) {
    ProcPtr left = parse_process(slurp(process_file, "process"));
    ProcPtr right = parse_process(slurp(second_file, "process"));
    auto lts_of = [&](const ProcPtr& p, const std::string& mon_file) {
      if (mon_file.empty()) return explore_lts(p, cfg.universe, cfg.state_bound);
      TrnPtr mon = parse_monitor(slurp(mon_file, "monitor"));
      return explore_composite(CompositeState{mon, p}, cfg.universe, cfg.state_bound)
          .to_lts();
    };
    BisimResult r = bisimilar(lts_of(left, monitor_a), lts_of(right, monitor_b));
    if (opts.json_output) {
      json j{{"check", "bisim"}, {"status", r.bisimilar ? "Holds" : "Fails"}};
      if (!r.bisimilar) j["distinguisher"] = r.distinguisher;
      std::cout << j.dump(2) << "\n";
    } else if (r.bisimilar) {
      std::cout << "bisimilar\n";
    } else {
      std::cout << "not bisimilar: " << r.distinguisher << "\n";
    }
    return r.bisimilar ? 0 : 1;
  }

  if (compare->parsed()) {
    TrnPtr cand = parse_monitor(slurp(monitor_file, "monitor"));
    TrnPtr ref = parse_monitor(slurp(reference_file, "monitor"));
    parse_formula(slurp(formula_file, "formula"));  // context; must parse
    std::vector<std::pair<std::string, ExplicitTrace>> named;
    for (const auto& entry : fs::directory_iterator(traces_dir)) {
      if (entry.path().extension() != ".tr") continue;
      named.emplace_back(entry.path().filename().string(),
                         parse_trace(read_file(entry.path().string())));
    }
    std::sort(named.begin(), named.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<ExplicitTrace> traces;
    for (auto& [name, t] : named) traces.push_back(std::move(t));
    CompareReport rep =
        compare_intrusiveness(cand, ref, traces, cfg.universe, cfg.step_bound);
    auto caps_str = [](const std::set<Capability>& cs) {
      std::string out = "{";
      bool first = true;
      for (auto c : cs) {
        out += (first ? "" : ", ") + capability_str(c);
        first = false;
      }
      return out + "}";
    };
    if (opts.json_output) {
      json rows = json::array();
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        rows.push_back({{"trace", named[i].first},
                        {"candidate", mc_json(row.candidate)},
                        {"reference", mc_json(row.reference)},
                        {"candidateWorse", row.candidate_worse}});
      }
      json j{{"check", "compare"},
             {"etpContained", rep.etp_contained},
             {"candidateEtp", caps_str(rep.candidate_etp)},
             {"referenceEtp", caps_str(rep.reference_etp)},
             {"candidateNeverWorse", rep.candidate_never_worse},
             {"rows", rows}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "etp: candidate " << caps_str(rep.candidate_etp) << " vs reference "
                << caps_str(rep.reference_etp)
                << (rep.etp_contained ? " (contained)" : " (NOT contained)") << "\n";
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        auto fmt = [](const McResult& r) {
          return r.divergent ? std::string("divergent") : std::to_string(r.count);
        };
        std::cout << "  " << named[i].first << ": candidate " << fmt(row.candidate)
                  << ", reference " << fmt(row.reference)
                  << (row.candidate_worse ? "  <- candidate worse" : "") << "\n";
      }
    }
    return rep.etp_contained && rep.candidate_never_worse ? 0 : 1;
  }

  if (export_dot->parsed()) {
    ProcPtr p = parse_process(slurp(process_file, "process"));
    if (monitor_file.empty()) {
      Lts l = explore_lts(p, cfg.universe, cfg.state_bound);
      std::cout << (opts.json_output ? "" : lts_dot(l));
      if (opts.json_output) {
        json j{{"initial", l.initial}, {"states", l.labels}};
        json trans = json::array();
        for (std::size_t i = 0; i < l.succ.size(); ++i)
          for (const auto& [a, t] : l.succ[i])
            trans.push_back({{"from", i}, {"action", a.str()}, {"to", t}});
        j["transitions"] = trans;
        std::cout << j.dump(2) << "\n";
      }
    } else {
      TrnPtr mon = parse_monitor(slurp(monitor_file, "monitor"));
      CompositeLts c =
          explore_composite(CompositeState{mon, p}, cfg.universe, cfg.state_bound);
      std::cout << (opts.json_output ? composite_json(c) + "\n" : composite_dot(c));
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
