#include "steerlab/universe.hpp"

#include "steerlab/error.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace steerlab {

const char* to_string(RrType t) { return t == RrType::A ? "A" : "AAAA"; }
const char* to_string(Health h) { return h == Health::Up ? "up" : "down"; }

Candidate Candidate::create(std::string id, const std::vector<ResourceRecord>& records,
                            CandidateMetadata metadata) {
  if (id.empty()) {
    throw Error(ErrorKind::InvalidInput, "candidate id must be non-empty");
  }
  if (records.empty()) {
    throw Error(ErrorKind::InvalidInput, "candidate '" + id + "' has an empty rrset");
  }
  if (metadata.weight < 0) {
    throw Error(ErrorKind::InvalidInput,
                "candidate '" + id + "' has negative weight " + to_text(metadata.weight));
  }
  Candidate c;
  c.id_ = std::move(id);
  c.rrtype_ = records.front().rrtype;
  c.ttl_ = records.front().ttl;
  c.metadata_ = std::move(metadata);
  for (const ResourceRecord& r : records) {
    // RRset coherence: a candidate is a single atomic RRset, so every record
    // must carry the same type and ttl.
    if (r.rrtype != c.rrtype_) {
      throw Error(ErrorKind::InvalidInput,
                  "candidate '" + c.id_ + "' mixes record types in one rrset");
    }
    if (r.ttl != c.ttl_) {
      throw Error(ErrorKind::InvalidInput,
                  "candidate '" + c.id_ + "' mixes ttls in one rrset");
    }
    if (r.rdata.empty()) {
      throw Error(ErrorKind::InvalidInput,
                  "candidate '" + c.id_ + "' contains a record with empty rdata");
    }
    c.rdata_.push_back(r.rdata);
  }
  return c;
}

bool Candidate::operator==(const Candidate& other) const {
  return id_ == other.id_ && rrtype_ == other.rrtype_ && ttl_ == other.ttl_ &&
         rdata_ == other.rdata_ && metadata_.weight == other.metadata_.weight &&
         metadata_.priority == other.metadata_.priority && metadata_.tag == other.metadata_.tag &&
         metadata_.health == other.metadata_.health;
}

std::shared_ptr<const Universe> Universe::create(AttributeSchema schema,
                                                 std::vector<Candidate> candidates,
                                                 UniverseCaps caps) {
  auto u = std::shared_ptr<Universe>(new Universe());
  u->schema_ = std::move(schema);
  u->candidates_ = std::move(candidates);
  u->caps_ = caps;

  std::set<std::string> attr_names;
  u->context_count_ = 1;
  for (const Attribute& a : u->schema_.attributes) {
    if (a.name.empty()) {
      throw Error(ErrorKind::InvalidInput, "attribute name must be non-empty");
    }
    if (!attr_names.insert(a.name).second) {
      throw Error(ErrorKind::InvalidInput, "duplicate attribute '" + a.name + "'");
    }
    if (a.values.empty()) {
      throw Error(ErrorKind::InvalidInput, "attribute '" + a.name + "' has an empty domain");
    }
    std::set<std::string> vals;
    for (const std::string& v : a.values) {
      if (v.empty()) {
        throw Error(ErrorKind::InvalidInput, "attribute '" + a.name + "' has an empty value");
      }
      if (!vals.insert(v).second) {
        throw Error(ErrorKind::InvalidInput,
                    "attribute '" + a.name + "' repeats value '" + v + "'");
      }
    }
    if (u->context_count_ > caps.context_cap / a.values.size()) {
      throw Error(ErrorKind::CapExceeded,
                  "context space exceeds cap of " + std::to_string(caps.context_cap));
    }
    u->context_count_ *= a.values.size();
  }

  if (u->candidates_.empty()) {
    throw Error(ErrorKind::InvalidInput, "universe needs at least one candidate");
  }
  if (u->candidates_.size() > caps.candidate_cap) {
    throw Error(ErrorKind::CapExceeded,
                "candidate count exceeds cap of " + std::to_string(caps.candidate_cap));
  }
  std::set<std::string> ids;
  for (const Candidate& c : u->candidates_) {
    if (!ids.insert(c.id()).second) {
      throw Error(ErrorKind::InvalidInput, "duplicate candidate id '" + c.id() + "'");
    }
  }

  // Canonical subset order: by size, then lexicographically by the sorted
  // member-id sequence. Fixing this once makes every per-subset operation in
  // the algebra deterministic.
  const std::size_t n = u->candidates_.size();
  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<std::vector<std::string>> keys(total);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) {
        keys[mask].push_back(u->candidates_[i].id());
      }
    }
    std::sort(keys[mask].begin(), keys[mask].end());
    u->subsets_.push_back(mask);
  }
  std::sort(u->subsets_.begin(), u->subsets_.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              const auto sa = std::popcount(a);
              const auto sb = std::popcount(b);
              if (sa != sb) return sa < sb;
              return keys[a] < keys[b];
            });
  u->subset_ordinals_.assign(total, 0);
  for (std::size_t ord = 0; ord < u->subsets_.size(); ++ord) {
    u->subset_ordinals_[u->subsets_[ord]] = ord;
  }
  return u;
}

std::size_t Universe::attribute_index(const std::string& name) const {
  for (std::size_t i = 0; i < schema_.attributes.size(); ++i) {
    if (schema_.attributes[i].name == name) return i;
  }
  throw Error(ErrorKind::UnknownAttribute, "unknown attribute '" + name + "'");
}

std::uint16_t Universe::value_index(std::size_t attribute, const std::string& value) const {
  const Attribute& a = schema_.attributes.at(attribute);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] == value) return static_cast<std::uint16_t>(i);
  }
  throw Error(ErrorKind::UnknownValue,
              "attribute '" + a.name + "' has no value '" + value + "'");
}

std::size_t Universe::candidate_index(const std::string& id) const {
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (candidates_[i].id() == id) return i;
  }
  throw Error(ErrorKind::UnknownCandidate, "unknown candidate '" + id + "'");
}

std::vector<std::string> Universe::subset_ids(std::uint32_t mask) const {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (mask & (std::uint32_t{1} << i)) ids.push_back(candidates_[i].id());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string Universe::subset_to_string(std::uint32_t mask) const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const std::string& id : subset_ids(mask)) {
    if (!first) out << ',';
    out << id;
    first = false;
  }
  out << '}';
  return out.str();
}

QueryContext Universe::context_at(std::size_t index) const {
  if (index >= context_count_) {
    throw Error(ErrorKind::ContextOutsideUniverse,
                "context index " + std::to_string(index) + " out of range");
  }
  // Mixed-radix decode, first attribute most significant.
  std::vector<std::uint16_t> values(schema_.attributes.size(), 0);
  std::size_t rest = index;
  for (std::size_t i = schema_.attributes.size(); i-- > 0;) {
    const std::size_t radix = schema_.attributes[i].values.size();
    values[i] = static_cast<std::uint16_t>(rest % radix);
    rest /= radix;
  }
  return QueryContext(shared_from_this(), std::move(values));
}

QueryContext Universe::make_context(const std::map<std::string, std::string>& assignment) const {
  for (const auto& [name, _] : assignment) {
    attribute_index(name);  // reject assignments naming foreign attributes
  }
  std::vector<std::uint16_t> values;
  for (const Attribute& a : schema_.attributes) {
    auto it = assignment.find(a.name);
    if (it == assignment.end()) {
      throw Error(ErrorKind::ContextOutsideUniverse,
                  "context is missing attribute '" + a.name + "'");
    }
    values.push_back(value_index(attribute_index(a.name), it->second));
  }
  return QueryContext(shared_from_this(), std::move(values));
}

bool Universe::operator==(const Universe& other) const {
  if (this == &other) return true;
  if (schema_.attributes.size() != other.schema_.attributes.size()) return false;
  for (std::size_t i = 0; i < schema_.attributes.size(); ++i) {
    if (schema_.attributes[i].name != other.schema_.attributes[i].name) return false;
    if (schema_.attributes[i].values != other.schema_.attributes[i].values) return false;
  }
  return candidates_ == other.candidates_;
}

QueryContext::QueryContext(std::shared_ptr<const Universe> universe,
                           std::vector<std::uint16_t> values)
    : universe_(std::move(universe)), values_(std::move(values)) {
  if (values_.size() != universe_->attribute_count()) {
    throw Error(ErrorKind::ContextOutsideUniverse, "context arity mismatch");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] >= universe_->schema().attributes[i].values.size()) {
      throw Error(ErrorKind::ContextOutsideUniverse, "context value index out of range");
    }
  }
}

const std::string& QueryContext::value_name(std::size_t attribute) const {
  return universe_->schema().attributes[attribute].values[values_[attribute]];
}

std::size_t QueryContext::index() const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    idx = idx * universe_->schema().attributes[i].values.size() + values_[i];
  }
  return idx;
}

std::string QueryContext::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out << ' ';
    out << universe_->schema().attributes[i].name << '=' << value_name(i);
  }
  return out.str();
}

bool QueryContext::operator==(const QueryContext& other) const {
  return *universe_ == *other.universe_ && values_ == other.values_;
}

std::vector<QueryContext> enumerate_contexts(const std::shared_ptr<const Universe>& u) {
  std::vector<QueryContext> out;
  out.reserve(u->context_count());
  for (std::size_t i = 0; i < u->context_count(); ++i) {
    out.push_back(u->context_at(i));
  }
  return out;
}

std::vector<std::uint32_t> subsets(const Universe& u) {
  std::vector<std::uint32_t> out;
  out.reserve(u.subset_count());
  for (std::size_t i = 0; i < u.subset_count(); ++i) {
    out.push_back(u.subset_mask(i));
  }
  return out;
}

bool same_universe(const std::shared_ptr<const Universe>& a,
                   const std::shared_ptr<const Universe>& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace steerlab
