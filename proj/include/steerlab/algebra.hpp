#pragma once

#include "steerlab/predicate.hpp"
#include "steerlab/rational.hpp"
#include "steerlab/universe.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace steerlab {

/// One point of the raw carrier: nonnegative rational weight per answer
/// subset, keyed by the subset's canonical ordinal so iteration follows the
/// universe's subset order. Zero weights are never stored.
class OutcomeRow {
public:
  OutcomeRow() = default;

  void set(std::size_t subset_ordinal, const Rational& weight);
  void accumulate(std::size_t subset_ordinal, const Rational& weight);
  Rational get(std::size_t subset_ordinal) const;

  bool is_zero() const { return weights_.empty(); }
  std::size_t support_size() const { return weights_.size(); }
  Rational total() const;

  const std::map<std::size_t, Rational>& entries() const { return weights_; }

  /// Scale every weight so the total is exactly 1; zero rows stay zero.
  OutcomeRow normalized() const;

  bool operator==(const OutcomeRow& other) const { return weights_ == other.weights_; }
  bool operator<(const OutcomeRow& other) const { return weights_ < other.weights_; }

private:
  std::map<std::size_t, Rational> weights_;
};

/// An element of the semantic domain: a total map from context to raw
/// outcome row. Immutable; all combinators return fresh values.
class Behavior {
public:
  static Behavior from_rows(std::shared_ptr<const Universe> u, std::vector<OutcomeRow> rows);
  static Behavior constant(std::shared_ptr<const Universe> u, OutcomeRow row);

  const std::shared_ptr<const Universe>& universe() const { return universe_; }
  const OutcomeRow& row(std::size_t context_index) const { return rows_[context_index]; }
  const OutcomeRow& row(const QueryContext& c) const;
  const std::vector<OutcomeRow>& rows() const { return rows_; }

  /// Raw (pre-quotient) equality: every row identical.
  bool raw_equal(const Behavior& other) const;

private:
  Behavior(std::shared_ptr<const Universe> u, std::vector<OutcomeRow> rows)
      : universe_(std::move(u)), rows_(std::move(rows)) {}

  std::shared_ptr<const Universe> universe_;
  std::vector<OutcomeRow> rows_;
};

/// The resolver-visible quotient: per context either EMPTY or a probability
/// row summing to exactly 1.
class Observable {
public:
  explicit Observable(std::vector<OutcomeRow> rows) : rows_(std::move(rows)) {}

  /// EMPTY is represented by the zero row.
  bool empty_at(std::size_t context_index) const { return rows_[context_index].is_zero(); }
  const OutcomeRow& row(std::size_t context_index) const { return rows_[context_index]; }
  std::size_t context_count() const { return rows_.size(); }

  bool operator==(const Observable& other) const { return rows_ == other.rows_; }

private:
  std::vector<OutcomeRow> rows_;  // each row normalized or zero
};

struct EquivResult {
  bool equal = false;
  std::optional<QueryContext> witness;  // set when equal is false
};

// --- semiring operations -------------------------------------------------

Behavior add(const Behavior& f, const Behavior& g);  // ⊕ pointwise sum
Behavior mul(const Behavior& f, const Behavior& g);  // ⊗ pointwise product

Behavior zero(const std::shared_ptr<const Universe>& u);
Behavior one(const std::shared_ptr<const Universe>& u);

/// Pass-through where p holds (one()'s row), zero row elsewhere.
Behavior gate_of(const Predicate& p, const std::shared_ptr<const Universe>& u);

Observable observable(const Behavior& f);

/// Observational equivalence; on failure carries the first differing context
/// in enumeration order.
EquivResult equiv(const Behavior& f, const Behavior& g);

// --- selection constructors ----------------------------------------------

/// Point mass on one subset at every context.
Behavior fixed(const std::shared_ptr<const Universe>& u, const std::vector<std::string>& ids);

/// Arbitrary nonnegative weights per subset, same at every context.
/// Subsets may not repeat.
Behavior weighted(const std::shared_ptr<const Universe>& u,
                  const std::vector<std::pair<std::vector<std::string>, Rational>>& entries);

/// First healthy candidate in the given order is served surely; if none is
/// healthy the behavior is zero. Health is static metadata, so the choice is
/// resolved at construction.
Behavior priority(const std::shared_ptr<const Universe>& u, const std::vector<std::string>& order);

/// Per-context sure choice of one candidate, keyed by hashing the named
/// attribute's value — resolver-visible session stickiness.
Behavior affinity(const std::shared_ptr<const Universe>& u, const std::string& attribute);

/// Stable 64-bit hash used by affinity (FNV-1a); exposed so tests can pin
/// the per-context choices.
std::uint64_t stable_hash(const std::string& text);

// --- rendering -------------------------------------------------------------

/// "{a1}:1/4 {a2}:3/4" in canonical subset order; "-" for the zero row.
std::string row_to_string(const Universe& u, const OutcomeRow& row);

}  // namespace steerlab
