#pragma once

#include "steerlab/algebra.hpp"
#include "steerlab/predicate.hpp"

#include <memory>
#include <vector>

namespace steerlab {

/// One fiber of context ↦ observable outcome: the contexts, the shared
/// outcome (normalized row, zero = EMPTY), and a predicate that holds exactly
/// on those contexts.
struct Region {
  std::vector<std::size_t> contexts;  // ascending context indices, non-empty
  OutcomeRow outcome;                 // normalized; zero row means EMPTY
  Predicate predicate = Predicate::always();
};

/// Conditional–selection normal form: finitely many (predicate, outcome)
/// regions partitioning the context space, ordered by first context.
class NormalForm {
public:
  NormalForm(std::shared_ptr<const Universe> u, std::vector<Region> regions)
      : universe_(std::move(u)), regions_(std::move(regions)) {}

  const std::shared_ptr<const Universe>& universe() const { return universe_; }
  const std::vector<Region>& regions() const { return regions_; }

  /// Equality of normal forms is equality of (partition, outcomes) — never
  /// of predicate syntax, which is not unique.
  bool same_partition_and_outcomes(const NormalForm& other) const;

private:
  std::shared_ptr<const Universe> universe_;
  std::vector<Region> regions_;
};

/// Partition contexts into fibers of the observable, synthesize an exact
/// predicate per fiber. The synthesized predicates are verified against the
/// full context enumeration before returning.
NormalForm normalize(const Behavior& f);

/// ⊕ over regions of gate(predicateᵢ) ⊗ weighted(outcomeᵢ), algebra
/// primitives only.
Behavior reconstruct(const NormalForm& nf);

/// Number of fibers, 1 ≤ k ≤ |contexts|.
std::size_t region_count(const Behavior& f);

/// Exact predicate for an arbitrary non-empty context set: disjunction of
/// merged cubes over the schema attributes. Exposed for the realization
/// module, which needs predicates for coarsened regions too.
Predicate synthesize_predicate(const Universe& u, const std::vector<std::size_t>& contexts);

}  // namespace steerlab
