#pragma once

#include "steerlab/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace steerlab {

enum class RrType { A, AAAA };
enum class Health { Up, Down };

const char* to_string(RrType t);
const char* to_string(Health h);

/// One resource record as supplied by a universe author. All records of a
/// candidate must agree on rrtype and ttl (RRset coherence).
struct ResourceRecord {
  std::vector<std::uint8_t> rdata;
  RrType rrtype = RrType::A;
  std::uint32_t ttl = 0;
};

struct CandidateMetadata {
  Rational weight = 1;
  long long priority = 0;
  std::string tag = "none";
  Health health = Health::Up;
};

/// A candidate answer: one whole RRset plus selection metadata. Served
/// entirely or not at all.
class Candidate {
public:
  static Candidate create(std::string id, const std::vector<ResourceRecord>& records,
                          CandidateMetadata metadata);

  const std::string& id() const { return id_; }
  RrType rrtype() const { return rrtype_; }
  std::uint32_t ttl() const { return ttl_; }
  const std::vector<std::vector<std::uint8_t>>& rdata() const { return rdata_; }
  const CandidateMetadata& metadata() const { return metadata_; }

  bool operator==(const Candidate& other) const;

private:
  Candidate() = default;

  std::string id_;
  RrType rrtype_ = RrType::A;
  std::uint32_t ttl_ = 0;
  std::vector<std::vector<std::uint8_t>> rdata_;
  CandidateMetadata metadata_;
};

struct Attribute {
  std::string name;
  std::vector<std::string> values;  // finite, ordered, unique
};

struct AttributeSchema {
  std::vector<Attribute> attributes;
};

struct UniverseCaps {
  std::size_t context_cap = 65536;
  std::size_t candidate_cap = 8;
};

class Universe;

/// A total assignment of one value per schema attribute. Contexts are the
/// only query-side input any behavior may observe.
class QueryContext {
public:
  QueryContext(std::shared_ptr<const Universe> universe, std::vector<std::uint16_t> values);

  const Universe& universe() const { return *universe_; }
  const std::shared_ptr<const Universe>& universe_ptr() const { return universe_; }
  const std::vector<std::uint16_t>& values() const { return values_; }

  std::uint16_t value_index(std::size_t attribute) const { return values_[attribute]; }
  const std::string& value_name(std::size_t attribute) const;

  /// Position of this context in enumeration order.
  std::size_t index() const;

  /// "region=NA qtype=A" in schema order.
  std::string to_string() const;

  bool operator==(const QueryContext& other) const;

private:
  std::shared_ptr<const Universe> universe_;
  std::vector<std::uint16_t> values_;
};

/// The finite input space: schema (Q), candidates (A) and their metadata (M).
/// Immutable after create(); every other module shares it read-only.
class Universe : public std::enable_shared_from_this<Universe> {
public:
  static std::shared_ptr<const Universe> create(AttributeSchema schema,
                                                std::vector<Candidate> candidates,
                                                UniverseCaps caps = {});

  const AttributeSchema& schema() const { return schema_; }
  const std::vector<Candidate>& candidates() const { return candidates_; }
  const UniverseCaps& caps() const { return caps_; }

  std::size_t attribute_count() const { return schema_.attributes.size(); }
  std::size_t candidate_count() const { return candidates_.size(); }
  std::size_t context_count() const { return context_count_; }
  std::size_t subset_count() const { return subsets_.size(); }  // 2^|A|

  std::size_t attribute_index(const std::string& name) const;
  std::uint16_t value_index(std::size_t attribute, const std::string& value) const;
  std::size_t candidate_index(const std::string& id) const;

  /// Subsets of candidate ids in canonical order: by size, then by the
  /// lexicographic sequence of member ids. Ordinal 0 is always the empty set.
  std::uint32_t subset_mask(std::size_t ordinal) const { return subsets_[ordinal]; }
  std::size_t subset_ordinal(std::uint32_t mask) const { return subset_ordinals_[mask]; }
  std::vector<std::string> subset_ids(std::uint32_t mask) const;
  std::string subset_to_string(std::uint32_t mask) const;  // "{a1,a2}" / "{}"

  QueryContext context_at(std::size_t index) const;
  QueryContext make_context(const std::map<std::string, std::string>& assignment) const;

  bool operator==(const Universe& other) const;

private:
  Universe() = default;

  AttributeSchema schema_;
  std::vector<Candidate> candidates_;
  UniverseCaps caps_;
  std::size_t context_count_ = 1;
  std::vector<std::uint32_t> subsets_;         // ordinal -> mask
  std::vector<std::size_t> subset_ordinals_;   // mask -> ordinal
};

/// All contexts, exactly once, in lexicographic order over the declared
/// attribute domains (first attribute most significant).
std::vector<QueryContext> enumerate_contexts(const std::shared_ptr<const Universe>& u);

/// All 2^|A| answer subsets in canonical order. Throws CapExceeded when the
/// candidate count is over the universe cap (guarded at construction, kept
/// here for callers building subsets of foreign candidate lists).
std::vector<std::uint32_t> subsets(const Universe& u);

/// True when the two universes are structurally interchangeable; behaviors
/// over non-equal universes must not be combined.
bool same_universe(const std::shared_ptr<const Universe>& a,
                   const std::shared_ptr<const Universe>& b);

}  // namespace steerlab
