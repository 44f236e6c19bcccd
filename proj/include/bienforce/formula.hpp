#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bienforce/core.hpp"
#include "bienforce/lts.hpp"

namespace bienforce {

struct Formula;
using FormPtr = std::shared_ptr<const Formula>;

/// One conjunct: a symbolic necessity [pattern, condition] continuation.
struct NecBranch {
  Pattern pat;
  CondPtr cond;
  FormPtr cont;
};

/// Safety formulas: tt, ff, conjunctions of symbolic necessities, greatest
/// fixpoints, fixpoint variables. A singleton Conj is a bare necessity.
struct Formula {
  enum class Kind { Tt, Ff, Conj, Max, FVar };
  Kind kind = Kind::Tt;
  std::vector<NecBranch> branches;  // Conj
  std::string var;                  // Max / FVar
  FormPtr body;                     // Max
};

FormPtr f_tt();
FormPtr f_ff();
FormPtr f_conj(std::vector<NecBranch> branches);
FormPtr f_necessity(Pattern pat, CondPtr cond, FormPtr cont);
FormPtr f_max(std::string var, FormPtr body);
FormPtr f_fvar(std::string var);

std::string formula_str(const FormPtr& f);

/// Canonical text with conjunction branches sorted; conjunction is compared
/// modulo associativity/commutativity through this key.
std::string formula_key(const FormPtr& f);

inline bool formulas_equal(const FormPtr& a, const FormPtr& b) {
  return formula_key(a) == formula_key(b);
}

/// Parses the `.shml` grammar. Embedded-value shorthand (e.g. `[a?(y)] F`,
/// `[b!cls] F`) desugars to binder patterns plus equality conditions.
/// Errors: SyntaxError, UnguardedFixpointVariable, PayloadConstrainedInput.
FormPtr parse_formula(const std::string& text);

FormPtr subst_formula(const FormPtr& f, const Substitution& s);

/// Unfolds: body[max var. body / var], capture-avoiding.
FormPtr unfold_max(const FormPtr& max_formula);

/// The residual formula after one explicit action (tau is the identity), and
/// its lift to explicit traces.
FormPtr after(const FormPtr& f, const ExplicitAction& u);
FormPtr after_trace(const FormPtr& f, const ExplicitTrace& t);

struct NfDiagnostics {
  bool normal = true;
  std::string clause;               // first violated clause, empty when normal
  std::optional<Action> witness;    // overlapping action for disjointness failures
  std::string detail;
};

/// Normal-form validation: pairwise-disjoint conjunct modalities (decided by
/// enumeration over the universe, under every reachable instantiation of the
/// enclosing binders), fixpoint variables free in their binder's body and
/// guarded, tt/ff only at top level.
NfDiagnostics is_normal_form(const FormPtr& f, const Universe& universe);

struct SatResult {
  bool holds = true;
  ExplicitTrace witness;  // path to the refuted obligation, on failure
};

/// Coinductive satisfaction check of a closed formula against a finite LTS:
/// assume-true on revisit, refute through the necessity obligations, which
/// quantify over weak derivatives. Throws BoundError("ClosureBoundExceeded")
/// when more than closure_bound distinct instantiated subformulas appear.
SatResult satisfies(const Lts& lts, const FormPtr& f, int closure_bound = 10000);

}  // namespace bienforce
