#pragma once

#include "steerlab/algebra.hpp"
#include "steerlab/predicate.hpp"
#include "steerlab/universe.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace steerlab {

/// Deterministic generators for law checking and property tests. Everything
/// is driven by one std::mt19937_64 so a seed reproduces a full run.

inline std::size_t pick(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng() % bound);
}

/// A small universe: 1-3 attributes with 2-3 values each (context count
/// capped at 64) and 1-4 single-record candidates.
inline std::shared_ptr<const Universe> random_universe(std::mt19937_64& rng) {
  AttributeSchema schema;
  const std::size_t attr_count = 1 + pick(rng, 3);
  std::size_t contexts = 1;
  for (std::size_t a = 0; a < attr_count; ++a) {
    Attribute attr;
    attr.name = "k" + std::to_string(a);
    const std::size_t value_count = 2 + pick(rng, 2);
    if (contexts * value_count > 64) break;
    contexts *= value_count;
    for (std::size_t v = 0; v < value_count; ++v) {
      attr.values.push_back("v" + std::to_string(v));
    }
    schema.attributes.push_back(std::move(attr));
  }
  if (schema.attributes.empty()) {
    schema.attributes.push_back({"k0", {"v0", "v1"}});
  }

  std::vector<Candidate> candidates;
  const std::size_t candidate_count = 1 + pick(rng, 4);
  for (std::size_t i = 0; i < candidate_count; ++i) {
    ResourceRecord rec;
    rec.rrtype = RrType::A;
    rec.ttl = 30 + static_cast<std::uint32_t>(pick(rng, 270));
    rec.rdata = {192, 0, 2, static_cast<std::uint8_t>(1 + i)};
    CandidateMetadata md;
    md.weight = Rational(1 + pick(rng, 4));
    md.priority = static_cast<long long>(pick(rng, 5));
    md.health = pick(rng, 4) == 0 ? Health::Down : Health::Up;
    candidates.push_back(Candidate::create("a" + std::to_string(i + 1), {rec}, md));
  }
  return Universe::create(std::move(schema), std::move(candidates));
}

/// A raw outcome row: each subset gets weight n/d with n in 0..4 (0 prunes
/// the entry) and d in 1..4.
inline OutcomeRow random_row(std::mt19937_64& rng, const Universe& u) {
  OutcomeRow row;
  for (std::size_t s = 0; s < u.subset_count(); ++s) {
    const std::size_t num = pick(rng, 5);
    if (num == 0) continue;
    row.set(s, Rational(num, 1 + pick(rng, 4)));
  }
  return row;
}

inline Behavior random_behavior(std::mt19937_64& rng,
                                const std::shared_ptr<const Universe>& u) {
  std::vector<OutcomeRow> rows;
  rows.reserve(u->context_count());
  for (std::size_t c = 0; c < u->context_count(); ++c) {
    rows.push_back(random_row(rng, *u));
  }
  return Behavior::from_rows(u, std::move(rows));
}

/// A random predicate of bounded depth over u's schema.
inline Predicate random_predicate(std::mt19937_64& rng, const Universe& u, int depth = 2) {
  if (depth <= 0 || pick(rng, 3) == 0) {
    const std::size_t a = pick(rng, u.attribute_count());
    const Attribute& attr = u.schema().attributes[a];
    return Predicate::test(attr.name, attr.values[pick(rng, attr.values.size())]);
  }
  switch (pick(rng, 3)) {
    case 0:
      return Predicate::conj(random_predicate(rng, u, depth - 1),
                             random_predicate(rng, u, depth - 1));
    case 1:
      return Predicate::disj(random_predicate(rng, u, depth - 1),
                             random_predicate(rng, u, depth - 1));
    default:
      return Predicate::neg(random_predicate(rng, u, depth - 1));
  }
}

}  // namespace steerlab
