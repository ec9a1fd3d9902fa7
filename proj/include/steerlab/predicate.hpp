#pragma once

#include "steerlab/universe.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace steerlab {

/// Boolean expressions over attribute tests: attr = value, attr in {set},
/// closed under and/or/not, plus the literals true/false. Immutable values;
/// copying shares structure.
class Predicate {
public:
  struct Node;  // implementation detail, defined in predicate.cpp

  static Predicate always();
  static Predicate never();
  static Predicate test(std::string attribute, std::string value);
  static Predicate in_set(std::string attribute, std::vector<std::string> values);
  static Predicate conj(Predicate lhs, Predicate rhs);
  static Predicate disj(Predicate lhs, Predicate rhs);
  static Predicate neg(Predicate inner);

  /// Throws UnknownAttribute/UnknownValue if the predicate mentions anything
  /// outside the universe schema (C6 guard).
  void validate(const Universe& u) const;

  bool eval(const QueryContext& c) const;

  /// Names of all attributes mentioned anywhere in the expression.
  std::set<std::string> attributes_used() const;

  /// Canonical concrete syntax, re-parseable by the policy parser:
  /// precedence not > and > or, parentheses only where required.
  std::string to_string() const;

  bool operator==(const Predicate& other) const;  // structural equality

private:
  explicit Predicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

}  // namespace steerlab
