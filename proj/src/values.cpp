#include "bienforce/values.hpp"

#include <tuple>

namespace bienforce {

Value Value::integer(long long n) {
  Value v;
  v.kind_ = Kind::Int;
  v.num_ = n;
  return v;
}

Value Value::atom(std::string name) {
  Value v;
  v.kind_ = Kind::Atom;
  v.name_ = std::move(name);
  return v;
}

Value Value::tuple(std::vector<Value> items) {
  Value v;
  v.kind_ = Kind::Tuple;
  v.items_ = std::move(items);
  return v;
}

Value Value::cons(std::string name, std::vector<Value> args) {
  Value v;
  v.kind_ = Kind::Cons;
  v.name_ = std::move(name);
  v.items_ = std::move(args);
  return v;
}

bool Value::operator==(const Value& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Int:
      return num_ == other.num_;
    case Kind::Atom:
      return name_ == other.name_;
    case Kind::Tuple:
      return items_ == other.items_;
    case Kind::Cons:
      return name_ == other.name_ && items_ == other.items_;
  }
  return false;
}

bool Value::operator<(const Value& other) const {
  if (kind_ != other.kind_) return kind_ < other.kind_;
  switch (kind_) {
    case Kind::Int:
      return num_ < other.num_;
    case Kind::Atom:
      return name_ < other.name_;
    case Kind::Tuple:
      return items_ < other.items_;
    case Kind::Cons:
      return std::tie(name_, items_) < std::tie(other.name_, other.items_);
  }
  return false;
}

std::string Value::str() const {
  switch (kind_) {
    case Kind::Int:
      return std::to_string(num_);
    case Kind::Atom:
      return name_;
    case Kind::Tuple: {
      std::string out = "<";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out += ", ";
        out += items_[i].str();
      }
      return out + ">";
    }
    case Kind::Cons: {
      std::string out = name_ + "(";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out += ", ";
        out += items_[i].str();
      }
      return out + ")";
    }
  }
  return {};
}

bool Action::operator<(const Action& other) const {
  return std::tie(dir, port, payload) < std::tie(other.dir, other.port, other.payload);
}

bool ExplicitAction::operator<(const ExplicitAction& other) const {
  if (is_tau() != other.is_tau()) return is_tau();
  if (is_tau()) return false;
  return *act < *other.act;
}

std::string trace_str(const ExplicitTrace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += " . ";
    out += t[i].str();
  }
  return out;
}

std::size_t visible_length(const ExplicitTrace& t) {
  std::size_t n = 0;
  for (const auto& u : t)
    if (!u.is_tau()) ++n;
  return n;
}

}  // namespace bienforce
