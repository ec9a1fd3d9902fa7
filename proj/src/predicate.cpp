#include "steerlab/predicate.hpp"

#include "steerlab/error.hpp"

#include <algorithm>
#include <sstream>

namespace steerlab {

struct Predicate::Node {
  enum class Kind { True, False, Test, In, And, Or, Not } kind;
  std::string attribute;             // Test, In
  std::string value;                 // Test
  std::vector<std::string> values;   // In
  std::shared_ptr<const Node> lhs;   // And, Or, Not
  std::shared_ptr<const Node> rhs;   // And, Or
};

namespace {

using Node = Predicate::Node;
using Kind = Node::Kind;

std::shared_ptr<const Node> make_node(Node n) {
  return std::make_shared<const Node>(std::move(n));
}

bool eval_node(const Node& n, const QueryContext& c) {
  switch (n.kind) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Test: {
      const std::size_t a = c.universe().attribute_index(n.attribute);
      return c.value_name(a) == n.value;
    }
    case Kind::In: {
      const std::size_t a = c.universe().attribute_index(n.attribute);
      const std::string& v = c.value_name(a);
      return std::find(n.values.begin(), n.values.end(), v) != n.values.end();
    }
    case Kind::And:
      return eval_node(*n.lhs, c) && eval_node(*n.rhs, c);
    case Kind::Or:
      return eval_node(*n.lhs, c) || eval_node(*n.rhs, c);
    case Kind::Not:
      return !eval_node(*n.lhs, c);
  }
  return false;  // unreachable
}

void validate_node(const Node& n, const Universe& u) {
  switch (n.kind) {
    case Kind::True:
    case Kind::False:
      return;
    case Kind::Test: {
      const std::size_t a = u.attribute_index(n.attribute);
      u.value_index(a, n.value);
      return;
    }
    case Kind::In: {
      const std::size_t a = u.attribute_index(n.attribute);
      for (const std::string& v : n.values) u.value_index(a, v);
      return;
    }
    case Kind::And:
    case Kind::Or:
      validate_node(*n.lhs, u);
      validate_node(*n.rhs, u);
      return;
    case Kind::Not:
      validate_node(*n.lhs, u);
      return;
  }
}

void collect_attributes(const Node& n, std::set<std::string>& out) {
  switch (n.kind) {
    case Kind::True:
    case Kind::False:
      return;
    case Kind::Test:
    case Kind::In:
      out.insert(n.attribute);
      return;
    case Kind::And:
    case Kind::Or:
      collect_attributes(*n.lhs, out);
      collect_attributes(*n.rhs, out);
      return;
    case Kind::Not:
      collect_attributes(*n.lhs, out);
      return;
  }
}

int precedence(Kind k) {
  switch (k) {
    case Kind::Or:
      return 1;
    case Kind::And:
      return 2;
    case Kind::Not:
      return 3;
    default:
      return 4;  // atoms never need parentheses
  }
}

void print_node(const Node& n, std::ostringstream& out, int parent_prec) {
  const int prec = precedence(n.kind);
  const bool parens = prec < parent_prec;
  if (parens) out << '(';
  switch (n.kind) {
    case Kind::True:
      out << "true";
      break;
    case Kind::False:
      out << "false";
      break;
    case Kind::Test:
      out << n.attribute << " = " << n.value;
      break;
    case Kind::In: {
      out << n.attribute << " in {";
      for (std::size_t i = 0; i < n.values.size(); ++i) {
        if (i) out << ", ";
        out << n.values[i];
      }
      out << '}';
      break;
    }
    case Kind::And:
      print_node(*n.lhs, out, prec);
      out << " and ";
      // right child needs parens at equal precedence to keep the printed
      // tree left-associated exactly as parsed
      print_node(*n.rhs, out, prec + 1);
      break;
    case Kind::Or:
      print_node(*n.lhs, out, prec);
      out << " or ";
      print_node(*n.rhs, out, prec + 1);
      break;
    case Kind::Not:
      out << "not ";
      print_node(*n.lhs, out, prec + 1);
      break;
  }
  if (parens) out << ')';
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Test:
      return a.attribute == b.attribute && a.value == b.value;
    case Kind::In:
      return a.attribute == b.attribute && a.values == b.values;
    case Kind::And:
    case Kind::Or:
      return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
    case Kind::Not:
      return equal_nodes(*a.lhs, *b.lhs);
  }
  return false;
}

}  // namespace

Predicate Predicate::always() { return Predicate(make_node({.kind = Kind::True})); }

Predicate Predicate::never() { return Predicate(make_node({.kind = Kind::False})); }

Predicate Predicate::test(std::string attribute, std::string value) {
  if (attribute.empty() || value.empty()) {
    throw Error(ErrorKind::InvalidInput, "predicate test needs attribute and value");
  }
  Node n{.kind = Kind::Test};
  n.attribute = std::move(attribute);
  n.value = std::move(value);
  return Predicate(make_node(std::move(n)));
}

Predicate Predicate::in_set(std::string attribute, std::vector<std::string> values) {
  if (attribute.empty() || values.empty()) {
    throw Error(ErrorKind::InvalidInput, "predicate 'in' needs attribute and a non-empty set");
  }
  Node n{.kind = Kind::In};
  n.attribute = std::move(attribute);
  n.values = std::move(values);
  return Predicate(make_node(std::move(n)));
}

Predicate Predicate::conj(Predicate lhs, Predicate rhs) {
  Node n{.kind = Kind::And};
  n.lhs = std::move(lhs.node_);
  n.rhs = std::move(rhs.node_);
  return Predicate(make_node(std::move(n)));
}

Predicate Predicate::disj(Predicate lhs, Predicate rhs) {
  Node n{.kind = Kind::Or};
  n.lhs = std::move(lhs.node_);
  n.rhs = std::move(rhs.node_);
  return Predicate(make_node(std::move(n)));
}

Predicate Predicate::neg(Predicate inner) {
  Node n{.kind = Kind::Not};
  n.lhs = std::move(inner.node_);
  return Predicate(make_node(std::move(n)));
}

void Predicate::validate(const Universe& u) const { validate_node(*node_, u); }

bool Predicate::eval(const QueryContext& c) const { return eval_node(*node_, c); }

std::set<std::string> Predicate::attributes_used() const {
  std::set<std::string> out;
  collect_attributes(*node_, out);
  return out;
}

std::string Predicate::to_string() const {
  std::ostringstream out;
  print_node(*node_, out, 0);
  return out.str();
}

bool Predicate::operator==(const Predicate& other) const {
  return equal_nodes(*node_, *other.node_);
}

}  // namespace steerlab
