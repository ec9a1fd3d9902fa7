#pragma once

#include "steerlab/algebra.hpp"
#include "steerlab/normalform.hpp"
#include "steerlab/predicate.hpp"
#include "steerlab/realization.hpp"
#include "steerlab/universe.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace steerlab {

/// Policy surface syntax tree. `merge` is the surface form of ⊕ and
/// `when … apply …` of gate-⊗; `product` (general ⊗) parses only when the
/// extended-algebra switch is on.
struct PolicyNode {
  enum class Kind { Zero, One, Fixed, Weighted, Priority, Affinity, When, Merge, Product } kind;

  std::vector<std::string> ids;  // Fixed subset / Priority order
  std::vector<std::pair<std::vector<std::string>, Rational>> entries;  // Weighted
  std::string attribute;                                               // Affinity
  Predicate predicate = Predicate::always();                           // When
  std::vector<std::shared_ptr<const PolicyNode>> children;             // When(1)/Merge(n)/Product(2)
};

struct PolicyDocument {
  std::string universe_ref;  // optional `universe "<path>"` header; empty if absent
  std::shared_ptr<const PolicyNode> expression;
};

// --- universes --------------------------------------------------------------

std::shared_ptr<const Universe> parse_universe(const std::string& text);
std::string print_universe(const Universe& u, const std::string& name = "u");

// --- policies ---------------------------------------------------------------

PolicyDocument parse_policy(const std::string& text, bool extended_algebra = false);
std::string print_policy(const PolicyDocument& doc);

/// Bind the syntax tree to a universe and build the behavior. Unknown
/// attributes/values/candidates surface as SemanticError with the offender.
Behavior elaborate(const PolicyDocument& doc, const std::shared_ptr<const Universe>& u);

// --- profiles ---------------------------------------------------------------

RealizationProfile parse_profile(const std::string& text);
std::string print_profile(const RealizationProfile& p);

// --- normal forms -----------------------------------------------------------

/// `when <predicate> serve <outcome>` clauses, one per line, in region
/// order; outcome is `empty`, `fixed {...}` or `weighted {...}`.
std::string print_normal_form(const NormalForm& nf);

/// Inverse of print_normal_form; the clauses must partition the context
/// space. Outcomes are normalized on entry, so printing a parsed form
/// reproduces the text bit-exactly.
NormalForm parse_normal_form(const std::string& text, const std::shared_ptr<const Universe>& u);

// --- small pieces -----------------------------------------------------------

/// "region=NA qtype=A" (commas optional) → a total context.
QueryContext parse_context(const std::string& text, const std::shared_ptr<const Universe>& u);

/// Standalone predicate parser (same grammar as inside policies).
Predicate parse_predicate(const std::string& text);

}  // namespace steerlab
