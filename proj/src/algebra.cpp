#include "steerlab/algebra.hpp"

#include "steerlab/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace steerlab {

namespace {

void require_same_universe(const Behavior& f, const Behavior& g) {
  if (!same_universe(f.universe(), g.universe())) {
    throw Error(ErrorKind::UniverseMismatch, "behaviors live over different universes");
  }
}

std::uint32_t mask_of_ids(const Universe& u, const std::vector<std::string>& ids) {
  std::uint32_t mask = 0;
  for (const std::string& id : ids) {
    const std::uint32_t bit = std::uint32_t{1} << u.candidate_index(id);
    if (mask & bit) {
      throw Error(ErrorKind::InvalidInput, "candidate '" + id + "' repeated in subset");
    }
    mask |= bit;
  }
  return mask;
}

}  // namespace

void OutcomeRow::set(std::size_t subset_ordinal, const Rational& weight) {
  if (weight < 0) {
    throw Error(ErrorKind::InvalidInput, "negative outcome weight " + to_text(weight));
  }
  if (weight == 0) {
    weights_.erase(subset_ordinal);
  } else {
    weights_[subset_ordinal] = weight;
  }
}

void OutcomeRow::accumulate(std::size_t subset_ordinal, const Rational& weight) {
  set(subset_ordinal, get(subset_ordinal) + weight);
}

Rational OutcomeRow::get(std::size_t subset_ordinal) const {
  auto it = weights_.find(subset_ordinal);
  return it == weights_.end() ? Rational(0) : it->second;
}

Rational OutcomeRow::total() const {
  Rational sum = 0;
  for (const auto& [_, w] : weights_) sum += w;
  return sum;
}

OutcomeRow OutcomeRow::normalized() const {
  OutcomeRow out;
  const Rational sum = total();
  if (sum == 0) return out;
  for (const auto& [ord, w] : weights_) out.set(ord, w / sum);
  return out;
}

Behavior Behavior::from_rows(std::shared_ptr<const Universe> u, std::vector<OutcomeRow> rows) {
  if (rows.size() != u->context_count()) {
    throw Error(ErrorKind::InvalidInput, "behavior must define a row for every context (C3)");
  }
  for (const OutcomeRow& r : rows) {
    if (!r.entries().empty() && r.entries().rbegin()->first >= u->subset_count()) {
      throw Error(ErrorKind::InvalidInput, "outcome row references a subset outside the universe");
    }
  }
  return Behavior(std::move(u), std::move(rows));
}

Behavior Behavior::constant(std::shared_ptr<const Universe> u, OutcomeRow row) {
  std::vector<OutcomeRow> rows(u->context_count(), row);
  return from_rows(std::move(u), std::move(rows));
}

const OutcomeRow& Behavior::row(const QueryContext& c) const {
  if (!same_universe(universe_, c.universe_ptr())) {
    throw Error(ErrorKind::ContextOutsideUniverse, "context belongs to a different universe");
  }
  return rows_[c.index()];
}

bool Behavior::raw_equal(const Behavior& other) const {
  return same_universe(universe_, other.universe_) && rows_ == other.rows_;
}

Behavior add(const Behavior& f, const Behavior& g) {
  require_same_universe(f, g);
  std::vector<OutcomeRow> rows;
  rows.reserve(f.universe()->context_count());
  for (std::size_t c = 0; c < f.universe()->context_count(); ++c) {
    OutcomeRow row = f.row(c);
    for (const auto& [ord, w] : g.row(c).entries()) row.accumulate(ord, w);
    rows.push_back(std::move(row));
  }
  return Behavior::from_rows(f.universe(), std::move(rows));
}

Behavior mul(const Behavior& f, const Behavior& g) {
  require_same_universe(f, g);
  std::vector<OutcomeRow> rows;
  rows.reserve(f.universe()->context_count());
  for (std::size_t c = 0; c < f.universe()->context_count(); ++c) {
    OutcomeRow row;
    // support of the product is inside the intersection of supports
    for (const auto& [ord, w] : f.row(c).entries()) {
      const Rational gw = g.row(c).get(ord);
      if (gw != 0) row.set(ord, w * gw);
    }
    rows.push_back(std::move(row));
  }
  return Behavior::from_rows(f.universe(), std::move(rows));
}

Behavior zero(const std::shared_ptr<const Universe>& u) {
  return Behavior::from_rows(u, std::vector<OutcomeRow>(u->context_count()));
}

Behavior one(const std::shared_ptr<const Universe>& u) {
  OutcomeRow row;
  for (std::size_t ord = 0; ord < u->subset_count(); ++ord) row.set(ord, 1);
  return Behavior::constant(u, std::move(row));
}

Behavior gate_of(const Predicate& p, const std::shared_ptr<const Universe>& u) {
  p.validate(*u);
  OutcomeRow pass;
  for (std::size_t ord = 0; ord < u->subset_count(); ++ord) pass.set(ord, 1);
  std::vector<OutcomeRow> rows;
  rows.reserve(u->context_count());
  for (std::size_t c = 0; c < u->context_count(); ++c) {
    rows.push_back(p.eval(u->context_at(c)) ? pass : OutcomeRow());
  }
  return Behavior::from_rows(u, std::move(rows));
}

Observable observable(const Behavior& f) {
  std::vector<OutcomeRow> rows;
  rows.reserve(f.rows().size());
  for (const OutcomeRow& r : f.rows()) rows.push_back(r.normalized());
  return Observable(std::move(rows));
}

EquivResult equiv(const Behavior& f, const Behavior& g) {
  require_same_universe(f, g);
  for (std::size_t c = 0; c < f.universe()->context_count(); ++c) {
    if (f.row(c).normalized() != g.row(c).normalized()) {
      return EquivResult{false, f.universe()->context_at(c)};
    }
  }
  return EquivResult{true, std::nullopt};
}

Behavior fixed(const std::shared_ptr<const Universe>& u, const std::vector<std::string>& ids) {
  OutcomeRow row;
  row.set(u->subset_ordinal(mask_of_ids(*u, ids)), 1);
  return Behavior::constant(u, std::move(row));
}

Behavior weighted(const std::shared_ptr<const Universe>& u,
                  const std::vector<std::pair<std::vector<std::string>, Rational>>& entries) {
  if (entries.empty()) {
    throw Error(ErrorKind::InvalidInput, "weighted selection needs at least one entry");
  }
  OutcomeRow row;
  std::set<std::size_t> seen;
  for (const auto& [ids, w] : entries) {
    if (w < 0) {
      throw Error(ErrorKind::InvalidInput, "weighted selection has negative weight " + to_text(w));
    }
    const std::size_t ord = u->subset_ordinal(mask_of_ids(*u, ids));
    if (!seen.insert(ord).second) {
      throw Error(ErrorKind::InvalidInput,
                  "weighted selection repeats subset " + u->subset_to_string(u->subset_mask(ord)));
    }
    row.set(ord, w);
  }
  return Behavior::constant(u, std::move(row));
}

Behavior priority(const std::shared_ptr<const Universe>& u, const std::vector<std::string>& order) {
  if (order.empty()) {
    throw Error(ErrorKind::InvalidInput, "priority selection needs a non-empty order");
  }
  std::set<std::string> seen;
  for (const std::string& id : order) {
    u->candidate_index(id);
    if (!seen.insert(id).second) {
      throw Error(ErrorKind::InvalidInput, "priority order repeats candidate '" + id + "'");
    }
  }
  for (const std::string& id : order) {
    if (u->candidates()[u->candidate_index(id)].metadata().health == Health::Up) {
      return fixed(u, {id});
    }
  }
  return zero(u);  // every listed candidate is down
}

std::uint64_t stable_hash(const std::string& text) {
  // FNV-1a, fixed parameters; must never change or affinity choices shift.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

Behavior affinity(const std::shared_ptr<const Universe>& u, const std::string& attribute) {
  const std::size_t attr = u->attribute_index(attribute);
  std::vector<OutcomeRow> rows;
  rows.reserve(u->context_count());
  for (std::size_t c = 0; c < u->context_count(); ++c) {
    const QueryContext ctx = u->context_at(c);
    const std::uint64_t h = stable_hash(attribute + "=" + ctx.value_name(attr));
    const std::size_t pick = static_cast<std::size_t>(h % u->candidate_count());
    OutcomeRow row;
    row.set(u->subset_ordinal(std::uint32_t{1} << pick), 1);
    rows.push_back(std::move(row));
  }
  return Behavior::from_rows(u, std::move(rows));
}

std::string row_to_string(const Universe& u, const OutcomeRow& row) {
  if (row.is_zero()) return "-";
  std::ostringstream out;
  bool first = true;
  for (const auto& [ord, w] : row.entries()) {
    if (!first) out << ' ';
    out << u.subset_to_string(u.subset_mask(ord)) << ':' << to_text(w);
    first = false;
  }
  return out.str();
}

}  // namespace steerlab
