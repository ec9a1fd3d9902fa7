#pragma once

#include "steerlab/algebra.hpp"
#include "steerlab/normalform.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace steerlab {

enum class SelectionKind { Fixed, Weighted, Priority, Affinity };

const char* to_string(SelectionKind k);
SelectionKind selection_kind_from_string(const std::string& name);

/// A modeled realization: forbidden expressions (substructure: attributes,
/// selections, region budget) plus identified expressions (congruence:
/// weight quantization and/or distribution forgetting).
///
/// An unset optional means "unrestricted"; an empty set means "nothing
/// allowed" — the two are deliberately distinct.
struct RealizationProfile {
  std::string name = "unnamed";
  std::optional<std::set<std::string>> allowed_attributes;
  std::optional<std::set<SelectionKind>> allowed_selections;
  std::optional<Rational> weight_quantum;
  std::optional<std::size_t> max_regions;
  bool forget_distribution = false;

  bool attribute_allowed(const std::string& attr) const;
  bool selection_allowed(SelectionKind k) const;

  /// Checks profile-internal invariants: quantum positive and dividing 1
  /// exactly (otherwise quantization is not idempotent), max_regions ≥ 1.
  void validate() const;

  /// Additionally checks allowed_attributes ⊆ schema.
  void validate_against(const Universe& u) const;
};

struct AdmitResult {
  bool admitted = false;
  std::string diagnosis;  // first violated restriction; empty when admitted
};

/// Substructure membership: normalize(f) must use only allowed attributes,
/// outcomes expressible by allowed selections, weights on the quantum grid,
/// region count within budget. Diagnosis names the first violation.
AdmitResult admits(const RealizationProfile& R, const Behavior& f);

/// Canonical representative of f's congruence class. A profile with no
/// identified expressions (no quantum, no forgetting) induces the trivial
/// congruence, so collapse is the identity. Otherwise, per context:
/// normalize, quantize cumulative weights to the grid (round half-up on the
/// running sum, which keeps the rounded row summing to exactly 1), then, if
/// forgetting, replace the row by its support indicator. Idempotent.
Behavior collapse(const RealizationProfile& R, const Behavior& f);

/// admits(R,f) and collapse acts observably as the identity on f.
bool exactly_representable(const RealizationProfile& R, const Behavior& f);

/// Unordered context pairs (stored i<j) the behavior tells apart.
struct DistinctionSet {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // sorted ascending

  bool contains(std::size_t a, std::size_t b) const;
  bool subset_of(const DistinctionSet& other) const;
  std::size_t size() const { return pairs.size(); }
  bool operator==(const DistinctionSet& other) const { return pairs == other.pairs; }
};

DistinctionSet distinctions(const Behavior& f);
DistinctionSet preserved(const Behavior& f, const Behavior& g);

struct Approximation {
  Behavior behavior;
  DistinctionSet preserved_distinctions;
  bool minimal = false;  // no returned candidate preserves strictly more
};

/// Candidate approximations of f inside the profile: coarsen the fiber
/// partition onto allowed-attribute cylinders (partition join), synthesize
/// per-block outcomes (average / majority / extremal point masses), take
/// every combination, collapse, keep the admitted ones, deduplicate
/// observably, and rank by preserved distinctions (most-preserving first).
/// May be empty.
std::vector<Approximation> approximations(const RealizationProfile& R, const Behavior& f);

/// The coarsening half of the lowering map: average raw rows over
/// allowed-attribute cylinders. Identity when every attribute is allowed.
Behavior coarsen(const RealizationProfile& R, const Behavior& f);

/// h = collapse(R, ·) ∘ coarsen(R, ·), the candidate homomorphism into the
/// realization's quotient algebra.
Behavior lower_map(const RealizationProfile& R, const Behavior& f);

enum class Verdict { Yes, No };

struct LawCounterexample {
  Behavior lhs_operand;
  Behavior rhs_operand;
  std::string law;  // "add" or "mul"
  QueryContext witness;
};

struct LowerResult {
  Verdict verdict = Verdict::No;
  bool exhaustive = false;      // law checks covered every pair of the generated set
  std::size_t trials_run = 0;
  std::size_t subalgebra_size = 0;
  std::optional<Behavior> image;                    // h(f), always filled
  std::optional<LawCounterexample> counterexample;  // set when a law failed
  std::string reason;           // "laws hold" / failure description
};

/// Property-test whether h carries the subalgebra generated by f and the
/// profile-admissible gates homomorphically into the quotient algebra
/// (h(a∘b) ≡ collapse(h(a) ∘ h(b))), and whether h(f) lands among
/// approximations(R,f). Deterministic for a fixed seed; exhaustive when the
/// generated set is small enough.
LowerResult lowerable(const RealizationProfile& R, const Behavior& f, std::size_t trials,
                      std::uint64_t seed);

/// Atomic gates whose predicates mention only allowed attributes:
/// gate(true), gate(false), and gate(attr = v) for each allowed attribute
/// and value. These generate every admissible in-set/or gate under ⊕/⊗.
std::vector<Behavior> admissible_gates(const RealizationProfile& R,
                                       const std::shared_ptr<const Universe>& u);

/// Deterministic ⊕/⊗ closure of the seeds, raw-deduplicated, grown in
/// passes until no new element appears or max_size is reached.
std::vector<Behavior> generate_subalgebra(const std::vector<Behavior>& seeds,
                                          std::size_t max_size);

struct IrreversibilityReport {
  bool identified = false;    // collapse(f) ≡ collapse(f') while f ≢ f'
  bool irreversible = false;  // no admissible composition re-separates them
  std::size_t terms_checked = 0;
  std::optional<Behavior> separating_gate;  // set when irreversible is false
  std::optional<Behavior> separating_term;
};

/// Irreversibility made executable: once collapse identifies f and f', no composition
/// collapse(g⊗f ⊕ k) vs collapse(g⊗f' ⊕ k) with gate-generated admissible
/// g, k may tell them apart again.
IrreversibilityReport check_irreversibility(const RealizationProfile& R, const Behavior& f,
                                            const Behavior& f_prime, std::size_t max_terms);

}  // namespace steerlab
