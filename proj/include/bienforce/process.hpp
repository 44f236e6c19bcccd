#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bienforce/core.hpp"
#include "bienforce/lts.hpp"

namespace bienforce {

struct Process;
using ProcPtr = std::shared_ptr<const Process>;

/// Regular value-passing process terms. `TauP` is the distinguished
/// internal-step prefix (surface syntax `tau. P`), used among other things by
/// canonical trace systems.
struct Process {
  enum class Kind { Nil, Input, Output, TauP, Let, If, Choice, Rec, RecVar };
  Kind kind = Kind::Nil;
  std::string port;  // Input / Output
  std::string var;   // Input binder / Let binder / Rec / RecVar
  ExprPtr expr;      // Output payload / Let bound expression
  CondPtr cond;      // If
  ProcPtr a, b;      // continuation / branches
};

ProcPtr proc_nil();
ProcPtr proc_input(std::string port, std::string var, ProcPtr cont);
ProcPtr proc_output(std::string port, ExprPtr payload, ProcPtr cont);
ProcPtr proc_tau(ProcPtr cont);
ProcPtr proc_let(std::string var, ExprPtr expr, ProcPtr cont);
ProcPtr proc_if(CondPtr cond, ProcPtr then_p, ProcPtr else_p);
ProcPtr proc_choice(ProcPtr a, ProcPtr b);
ProcPtr proc_rec(std::string var, ProcPtr body);
ProcPtr proc_recvar(std::string var);

/// Reparseable canonical text; used as the state key during exploration.
std::string process_str(const ProcPtr& p);

/// Parses the `.proc` grammar. The result is closed and guarded, otherwise a
/// ParseError with code SyntaxError / UnguardedRecursion / FreeVariable.
ProcPtr parse_process(const std::string& text);

ProcPtr subst_process(const ProcPtr& p, const Substitution& s);

/// One strong step of the operational semantics. Inputs branch over the
/// universe's values; Let emits tau; If resolves silently; Rec unfolds.
std::vector<std::pair<ExplicitAction, ProcPtr>> step(const ProcPtr& p,
                                                     const Universe& universe);

/// All α-derivatives reachable via at most tau_bound τ-steps followed by α.
/// Throws BoundError("BoundExceeded") if the τ-closure is still growing at
/// the bound.
std::vector<ProcPtr> weak_step(const ProcPtr& p, const Action& action,
                               const Universe& universe, int tau_bound);

/// trc(t): the canonical system producing exactly the explicit trace t
/// (inputs generalized over values on the fixed port).
ProcPtr trace_system(const ExplicitTrace& t);

/// Reachable LTS up to syntactic identity of resolved terms. Throws
/// BoundError("StateBoundExceeded") past state_bound distinct states.
Lts explore_lts(const ProcPtr& p, const Universe& universe, int state_bound);

}  // namespace bienforce
