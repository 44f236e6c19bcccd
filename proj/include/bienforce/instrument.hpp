#pragma once

#include <string>
#include <vector>

#include "bienforce/lts.hpp"
#include "bienforce/monitor.hpp"
#include "bienforce/process.hpp"

namespace bienforce {

/// The instrumentation rules; every composite transition records which rule
/// derived it.
enum class InstrRule { BiTrnO, BiTrnI, BiDisO, BiDisI, BiEnO, BiEnI, BiAsy, BiDef };

std::string rule_str(InstrRule r);

/// A monitored system e[p].
struct CompositeState {
  TrnPtr monitor;
  ProcPtr process;

  std::string str() const {
    return monitor_str(monitor) + "[" + process_str(process) + "]";
  }
};

struct CompositeStep {
  ExplicitAction action;
  CompositeState target;
  std::vector<InstrRule> rules;  // all rules deriving this (action, target)
};

/// All transitions of e[p]: output transformation/suppression/defaulting,
/// environment-input transformation/suppression, insertions, and silent
/// system moves. Inputs the monitor cannot react to are blocked (no step).
std::vector<CompositeStep> composite_step(const CompositeState& s,
                                          const Universe& universe);

struct CompositeEdge {
  ExplicitAction action;
  int target = 0;
  std::vector<InstrRule> rules;
};

struct CompositeLts {
  int initial = 0;
  std::vector<CompositeState> states;
  std::vector<std::string> labels;
  std::vector<std::vector<CompositeEdge>> succ;

  /// Plain-LTS view (rule annotations dropped) for bisimulation checking.
  Lts to_lts() const;
};

CompositeLts explore_composite(const CompositeState& s, const Universe& universe,
                               int state_bound);

/// DOT rendering with transitions annotated by instrumentation rule names.
std::string composite_dot(const CompositeLts& c);

/// JSON transition table: states, initial, transitions with rule tags.
std::string composite_json(const CompositeLts& c);

std::string lts_dot(const Lts& l);

}  // namespace bienforce
