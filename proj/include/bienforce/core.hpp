#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bienforce/values.hpp"

namespace bienforce {

// ---------------------------------------------------------------------------
// Expressions and conditions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Var, Const, Cons, Tuple };
  Kind kind = Kind::Const;
  std::string name;           // Var / Cons
  Value value;                // Const
  std::vector<ExprPtr> args;  // Cons / Tuple
};

ExprPtr expr_var(std::string name);
ExprPtr expr_const(Value v);
ExprPtr expr_cons(std::string name, std::vector<ExprPtr> args);
ExprPtr expr_tuple(std::vector<ExprPtr> items);

enum class CmpOp { Eq, Neq, Le, Ge, Lt, Gt };

struct Condition;
using CondPtr = std::shared_ptr<const Condition>;

struct Condition {
  enum class Kind { Lit, Cmp, And, Or, Not };
  Kind kind = Kind::Lit;
  bool lit = true;
  CmpOp op = CmpOp::Eq;
  ExprPtr lhs, rhs;
  CondPtr a, b;  // And/Or operands; Not uses a
};

CondPtr cond_true();
CondPtr cond_false();
CondPtr cond_cmp(CmpOp op, ExprPtr l, ExprPtr r);
CondPtr cond_and(CondPtr a, CondPtr b);
CondPtr cond_or(CondPtr a, CondPtr b);
CondPtr cond_not(CondPtr a);

std::string expr_str(const ExprPtr& e);
std::string cond_str(const CondPtr& c);

bool cond_is_true(const CondPtr& c);

// ---------------------------------------------------------------------------
// Substitutions
// ---------------------------------------------------------------------------

/// Finite map from data variables to values. Port names are stored as atoms.
using Substitution = std::map<std::string, Value>;

ExprPtr subst_expr(const ExprPtr& e, const Substitution& s);
CondPtr subst_cond(const CondPtr& c, const Substitution& s);

ExprPtr rename_expr_var(const ExprPtr& e, const std::string& from, const std::string& to);
CondPtr rename_cond_var(const CondPtr& c, const std::string& from, const std::string& to);

void free_vars_expr(const ExprPtr& e, std::set<std::string>& out);
void free_vars_cond(const CondPtr& c, std::set<std::string>& out);

/// Evaluates a closed expression. Throws EvalError("UnboundVariable") when a
/// variable is missing from the substitution.
Value eval_expr(const ExprPtr& e, const Substitution& s);

/// Standard boolean evaluation after substitution. Ordering comparisons are
/// defined on Int only; anything else raises EvalError("TypeMismatch").
bool eval_condition(const CondPtr& c, const Substitution& s);

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

/// One slot of a pattern: a binder `(x)`, the don't-care binder `(_)`, a
/// literal port/value, or a reference to an enclosing binder (resolved to a
/// literal by substitution before the pattern is ever matched).
struct PatPart {
  enum class Kind { Binder, DontCare, Lit, Var };
  Kind kind = Kind::DontCare;
  std::string name;  // Binder / Var
  Value lit;         // Lit (ports as atoms)

  static PatPart binder(std::string n);
  static PatPart dont_care();
  static PatPart lit_port(const std::string& port);
  static PatPart lit_value(Value v);
  static PatPart var(std::string n);

  bool operator==(const PatPart& o) const;
};

struct Pattern {
  Direction dir = Direction::In;
  PatPart port;
  PatPart payload;

  bool operator==(const Pattern& o) const {
    return dir == o.dir && port == o.port && payload == o.payload;
  }
  std::string str() const;
};

/// Binder variables of the pattern, don't-cares excluded.
std::set<std::string> bound_vars(const Pattern& p);

/// True when neither part is an unresolved Var reference.
bool pattern_ground(const Pattern& p);

Pattern subst_pattern(const Pattern& p, const Substitution& s);

/// mtch(e, a): the smallest substitution mapping the pattern's binders to the
/// action's port/payload, or nullopt on direction/port/payload mismatch.
/// Total; don't-care binders match anything and bind nothing.
std::optional<Substitution> match_pattern(const Pattern& pattern, const Action& action);

// ---------------------------------------------------------------------------
// Universe
// ---------------------------------------------------------------------------

/// Finite carrier for enumeration: the configured ports and values.
struct Universe {
  std::vector<std::string> ports;
  std::vector<Value> values;

  bool has_value(const Value& v) const;
  /// All inputs then all outputs, ordered by port then value.
  std::vector<Action> action_set() const;
  std::vector<Action> input_actions() const;
};

/// The set of universe actions matched by the closed symbolic action
/// (pattern, cond). Throws Error("OpenSymbolicAction") when fv(cond) is not
/// covered by the pattern's binders or the pattern has unresolved variables.
std::vector<Action> denotation(const Pattern& pattern, const CondPtr& cond,
                               const Universe& universe);

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

/// Parses a `.tr`-style trace: actions separated by `.` or newlines, with the
/// literal `tau` for silent steps. `# ...` comments run to end of line.
ExplicitTrace parse_trace(const std::string& text);

Value parse_value(const std::string& text);

}  // namespace bienforce
