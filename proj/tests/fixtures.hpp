#pragma once

// Shared hand-built fixtures: the running two-attribute/two-candidate
// universe and the behaviors used across the suites.

#include "steerlab/algebra.hpp"
#include "steerlab/predicate.hpp"
#include "steerlab/realization.hpp"
#include "steerlab/universe.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fixtures {

using namespace steerlab;

inline Candidate make_candidate(const std::string& id, std::uint8_t last_octet,
                                std::uint32_t ttl = 60, Health health = Health::Up) {
  ResourceRecord rec;
  rec.rrtype = RrType::A;
  rec.ttl = ttl;
  rec.rdata = {192, 0, 2, last_octet};
  CandidateMetadata md;
  md.health = health;
  return Candidate::create(id, {rec}, md);
}

/// region in {NA, EU} x qtype in {A, AAAA}; candidates a1, a2.
/// Context order: 0=(NA,A) 1=(NA,AAAA) 2=(EU,A) 3=(EU,AAAA).
inline std::shared_ptr<const Universe> u0() {
  AttributeSchema schema;
  schema.attributes.push_back({"region", {"NA", "EU"}});
  schema.attributes.push_back({"qtype", {"A", "AAAA"}});
  return Universe::create(std::move(schema),
                          {make_candidate("a1", 1), make_candidate("a2", 2)});
}

/// NA -> surely a1, EU -> surely a2.
inline Behavior p_geo(const std::shared_ptr<const Universe>& u) {
  return add(mul(gate_of(Predicate::test("region", "NA"), u), fixed(u, {"a1"})),
             mul(gate_of(Predicate::test("region", "EU"), u), fixed(u, {"a2"})));
}

/// Everywhere: a1 with 1/4, a2 with 3/4.
inline Behavior p_w(const std::shared_ptr<const Universe>& u) {
  return weighted(u, {{{"a1"}, Rational(1, 4)}, {{"a2"}, Rational(3, 4)}});
}

/// Everywhere: a1 with 1/3, a2 with 2/3.
inline Behavior p_w2(const std::shared_ptr<const Universe>& u) {
  return weighted(u, {{{"a1"}, Rational(1, 3)}, {{"a2"}, Rational(2, 3)}});
}

inline RealizationProfile single_answer_profile() {
  RealizationProfile R;
  R.name = "single_answer";
  R.allowed_selections = std::set<SelectionKind>{SelectionKind::Fixed};
  R.max_regions = 4;
  return R;
}

inline RealizationProfile quantum_half_profile() {
  RealizationProfile R;
  R.name = "coarse_weights";
  R.weight_quantum = Rational(1, 2);
  return R;
}

inline RealizationProfile forget_profile() {
  RealizationProfile R;
  R.name = "support_only";
  R.forget_distribution = true;
  return R;
}

inline RealizationProfile identity_profile() {
  RealizationProfile R;
  R.name = "identity";
  return R;
}

inline RealizationProfile attribute_free_profile() {
  RealizationProfile R;
  R.name = "attribute_free";
  R.allowed_attributes = std::set<std::string>{};
  return R;
}

}  // namespace fixtures
