#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bienforce/formula.hpp"
#include "bienforce/instrument.hpp"
#include "bienforce/lts.hpp"
#include "bienforce/monitor.hpp"
#include "bienforce/process.hpp"

namespace bienforce {

// ------------------------------------------------------------- bisimulation

struct BisimResult {
  bool bisimilar = true;
  std::string distinguisher;  // human-readable evidence on failure
};

/// Strong bisimilarity of the initial states over Act ∪ {tau}, by partition
/// refinement on the disjoint union.
BisimResult bisimilar(const Lts& a, const Lts& b);

// ------------------------------------------------------------ §4 checkers

enum class VerdictStatus { Holds, FailsWithWitness, InconclusiveAtBound };

std::string verdict_status_str(VerdictStatus s);

struct Verdict {
  VerdictStatus status = VerdictStatus::Holds;
  ExplicitTrace witness;    // replayable composite trace, when meaningful
  std::string description;  // which corpus member / state failed and why
  long bound = 0;
  std::string note;  // e.g. unverified satisfiability precondition
};

struct CheckLimits {
  int state_bound = 10000;
  int closure_bound = 10000;
  int tau_bound = 64;
  int step_bound = 256;
  int depth = 8;  // visible actions, eventual transparency
};

/// Sound enforcement on a finite corpus: e[p] must satisfy f for every p.
/// The satisfiability precondition is tested against the corpus; when no
/// member satisfies f the verdict carries a note.
Verdict check_soundness(const TrnPtr& e, const FormPtr& f,
                        const std::vector<ProcPtr>& corpus, const Universe& universe,
                        const CheckLimits& limits);

/// Transparent enforcement: e[p] ~ p for every corpus p satisfying f;
/// non-satisfying members are skipped.
Verdict check_transparency(const TrnPtr& e, const FormPtr& f,
                           const std::vector<ProcPtr>& corpus, const Universe& universe,
                           const CheckLimits& limits);

/// Eventually transparent enforcement, bounded: along every composite run of
/// at most `limits.depth` visible actions reaching e'[p'] with
/// p' |= after(f, t), require e'[p'] ~ p'.
Verdict check_eventual_transparency(const TrnPtr& e, const FormPtr& f,
                                    const std::vector<ProcPtr>& corpus,
                                    const Universe& universe, const CheckLimits& limits);

// ------------------------------------------------------------------- mc

struct McEntry {
  std::string clause;  // modify | insert | identity | blocked
  std::string rule;    // instrumentation rule deriving the step
  std::optional<ExplicitAction> consumed;  // trace element consumed, if any
  std::optional<ExplicitAction> emitted;   // composite action, if any
  long residual = 0;                       // blocked: visible actions charged
};

struct McResult {
  bool divergent = false;
  long count = 0;
  std::vector<McEntry> derivation;
};

/// Modification count of e against the canonical replay of t: the minimum
/// over all derivations of modify+insert steps, plus the visible length of
/// the residual trace when the composite gets stuck. Insertion loops that
/// never terminate yield Divergent.
McResult modification_count(const TrnPtr& e, const ExplicitTrace& t,
                            const Universe& universe, int step_bound);

// ------------------------------------------------------------------ compare

struct CompareRow {
  ExplicitTrace trace;
  McResult candidate;
  McResult reference;
  bool candidate_worse = false;
};

struct CompareReport {
  bool etp_contained = false;  // etp(candidate) ⊆ etp(reference)
  std::set<Capability> candidate_etp;
  std::set<Capability> reference_etp;
  std::vector<CompareRow> rows;
  bool candidate_never_worse = true;
};

/// Desk-scale intrusiveness comparison: etp containment plus per-trace mc.
CompareReport compare_intrusiveness(const TrnPtr& candidate, const TrnPtr& reference,
                                    const std::vector<ExplicitTrace>& traces,
                                    const Universe& universe, int step_bound);

// --------------------------------------------------------------- generators

/// Deterministic per seed. Closed, guarded; inputs restricted to input_ports.
ProcPtr random_process(std::uint64_t seed, const Universe& universe,
                       const std::vector<std::string>& input_ports, int size_bound);

/// Normal-form by construction: conjunction branches get pairwise-distinct
/// (direction, port) keys.
FormPtr random_formula_nf(std::uint64_t seed, const Universe& universe, int size_bound);

/// A seeded run of p: explicit actions collected along a random walk.
ExplicitTrace random_trace(std::uint64_t seed, const ProcPtr& p, const Universe& universe,
                           int max_visible);

}  // namespace bienforce
