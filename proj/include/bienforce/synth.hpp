#pragma once

#include <string>
#include <vector>

#include "bienforce/formula.hpp"
#include "bienforce/monitor.hpp"

namespace bienforce {

/// Synthesis parameters: the finite input-port set the monitor must be able
/// to unblock, and the default payload it inserts to do so.
struct SynthesisConfig {
  std::vector<std::string> ports;
  Value default_value;
};

/// Compositional synthesis of an action disabling transducer from a closed
/// normal-form formula. tt/ff map to the identity monitor; fixpoints map to
/// recursion; each conjunction becomes a recursive summation of identity
/// prefixes (non-violating branches), disabling branches (violating ones),
/// and a catch-all default that forwards unspecified inputs.
/// Throws Error("NotNormalForm") when the formula fails is_normal_form.
TrnPtr synthesize(const FormPtr& f, const SynthesisConfig& cfg, const Universe& universe);

/// The disabling branch for one violating necessity: a suppression prefix
/// for output patterns, a summation of conditional default-value insertions
/// over cfg.ports for input patterns.
TrnPtr dis_branch(const Pattern& pat, const CondPtr& cond, const TrnPtr& cont,
                  const SynthesisConfig& cfg);

/// The catch-all branch of a normalized conjunction: forwards every input
/// matching none of the conjunction's input modalities, then behaves as id.
TrnPtr default_branch(const FormPtr& conj);

/// Removes recursion binders whose variable never occurs in the body.
TrnPtr simplify_monitor(const TrnPtr& e);

}  // namespace bienforce
