#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bienforce/core.hpp"

namespace bienforce {

/// The transformation slot of a prefix: the absence marker `.`, an implicit
/// replay of the matched action (identity shorthand), or an action template
/// instantiated from the matching substitution.
struct TransformAction {
  enum class Kind { Dot, Replay, Template };
  Kind kind = Kind::Replay;
  Direction dir = Direction::In;  // Template
  PatPart port;                   // Template: Lit or Var
  ExprPtr payload;                // Template

  static TransformAction dot();
  static TransformAction replay();
  static TransformAction action_template(Direction dir, PatPart port, ExprPtr payload);
};

struct Transducer;
using TrnPtr = std::shared_ptr<const Transducer>;

/// Symbolic transducers: transformation-prefix, summation, recursion.
/// A prefix whose pattern slot is `.` is an insertion prefix.
struct Transducer {
  enum class Kind { Prefix, Sum, Rec, TVar };
  Kind kind = Kind::Prefix;
  bool pat_is_dot = false;
  Pattern pat;
  CondPtr cond;
  TransformAction tact;
  TrnPtr cont;
  std::vector<TrnPtr> branches;  // Sum
  std::string var;               // Rec / TVar
  TrnPtr body;                   // Rec
};

TrnPtr t_prefix(Pattern pat, CondPtr cond, TransformAction tact, TrnPtr cont);
TrnPtr t_insertion(CondPtr cond, TransformAction tact, TrnPtr cont);
TrnPtr t_sum(std::vector<TrnPtr> branches);
TrnPtr t_rec(std::string var, TrnPtr body);
TrnPtr t_tvar(std::string var);

/// The two-branch recursive identity transducer (shared singleton).
TrnPtr identity_monitor();

bool is_identity_term(const TrnPtr& e);

std::string monitor_str(const TrnPtr& e);

/// Canonical key with recursion binders numbered by binding order and sum
/// branches sorted; two monitors are compared through it.
std::string monitor_alpha_key(const TrnPtr& e);

/// Parses the `.mon` grammar; `id` expands to the identity monitor, a prefix
/// without a transformation action is the identity shorthand. Errors:
/// SyntaxError, BothDot, DirectionMismatch, OpenTerm.
TrnPtr parse_monitor(const std::string& text);

TrnPtr subst_transducer(const TrnPtr& e, const Substitution& s);

/// One unfolding of a recursive term: body[rec var. body / var]. Identity on
/// non-recursive terms.
TrnPtr unfold_rec(const TrnPtr& e);

/// One enabled transform. source is empty for insertion labels, result is
/// empty for suppressions; never both.
struct MonitorTransform {
  std::optional<Action> source;
  std::optional<Action> result;
  TrnPtr cont;
};

/// All transforms consuming the given action, i.e. labels (source ▷ ·).
std::vector<MonitorTransform> transforms_of(const TrnPtr& e, const Action& source);

/// All insertion labels (· with source •), which are system-independent.
std::vector<MonitorTransform> insertions_of(const TrnPtr& e);

/// Every label enabled over the universe's action set (for inspection/tests).
std::vector<MonitorTransform> monitor_labels(const TrnPtr& e, const Universe& universe);

enum class Capability { Dis, En, Adpt };

std::string capability_str(Capability c);

/// Enforcement capabilities: which of {dis, en, adpt} the transducer can
/// apply, inferred from the syntactic shape of its transformation prefixes.
std::set<Capability> etp(const TrnPtr& e);

}  // namespace bienforce
