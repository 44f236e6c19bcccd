#pragma once

#include <string>
#include <vector>

#include "bienforce/formula.hpp"
#include "bienforce/monitor.hpp"
#include "bienforce/process.hpp"

namespace bienforce {

/// A named artifact from the built-in example library: the request-response
/// servers, the safety formulas, the hand-written monitors, and the
/// reference traces used by golden and acceptance tests.
struct NamedArtifact {
  std::string name;
  std::string kind;  // process | formula | monitor | trace
  std::string text;
  std::string provenance;  // behavioural description of the artifact
};

const std::vector<NamedArtifact>& corpus_artifacts();

/// Throws Error("UnknownName") for unregistered names.
const NamedArtifact& corpus_artifact(const std::string& name);

ProcPtr corpus_process(const std::string& name);
FormPtr corpus_formula(const std::string& name);
TrnPtr corpus_monitor(const std::string& name);
ExplicitTrace corpus_trace(const std::string& name);

/// The universe golden tests run under: ports {a,b,c}, values {1,2,cls,vdef}.
Universe corpus_universe();
Value corpus_default_value();

}  // namespace bienforce
