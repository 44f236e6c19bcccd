#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bienforce {

/// A closed data value: an integer, an atom (bare identifier, also used for
/// port names when they flow through substitutions), a tuple of length >= 2,
/// or a constructor application with at least one argument.
class Value {
 public:
  enum class Kind { Int, Atom, Tuple, Cons };

  static Value integer(long long n);
  static Value atom(std::string name);
  static Value tuple(std::vector<Value> items);
  static Value cons(std::string name, std::vector<Value> args);

  Kind kind() const { return kind_; }
  long long num() const { return num_; }
  const std::string& name() const { return name_; }
  const std::vector<Value>& items() const { return items_; }

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }
  // Total order used for canonical sorting; not a domain property.
  bool operator<(const Value& other) const;

  std::string str() const;

 private:
  Kind kind_ = Kind::Int;
  long long num_ = 0;
  std::string name_;
  std::vector<Value> items_;
};

enum class Direction { In, Out };

inline char direction_mark(Direction d) { return d == Direction::In ? '?' : '!'; }

/// A visible action: an input or output on a port carrying a value.
struct Action {
  Direction dir = Direction::In;
  std::string port;
  Value payload;

  bool operator==(const Action& other) const {
    return dir == other.dir && port == other.port && payload == other.payload;
  }
  bool operator!=(const Action& other) const { return !(*this == other); }
  bool operator<(const Action& other) const;

  std::string str() const { return port + direction_mark(dir) + payload.str(); }
};

inline Action input(std::string port, Value v) {
  return Action{Direction::In, std::move(port), std::move(v)};
}
inline Action output(std::string port, Value v) {
  return Action{Direction::Out, std::move(port), std::move(v)};
}

/// A visible action or the silent action tau.
struct ExplicitAction {
  std::optional<Action> act;  // nullopt = tau

  static ExplicitAction tau() { return ExplicitAction{std::nullopt}; }
  static ExplicitAction visible(Action a) { return ExplicitAction{std::move(a)}; }

  bool is_tau() const { return !act.has_value(); }
  const Action& action() const { return *act; }

  bool operator==(const ExplicitAction& other) const { return act == other.act; }
  bool operator!=(const ExplicitAction& other) const { return !(*this == other); }
  bool operator<(const ExplicitAction& other) const;

  std::string str() const { return act ? act->str() : "tau"; }
};

using ExplicitTrace = std::vector<ExplicitAction>;

std::string trace_str(const ExplicitTrace& t);
std::size_t visible_length(const ExplicitTrace& t);

}  // namespace bienforce
