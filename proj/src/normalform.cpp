#include "steerlab/normalform.hpp"

#include "steerlab/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace steerlab {

namespace {

/// A cube assigns one value-set per relevant attribute; it covers the
/// product of those sets. Merging cubes that differ in exactly one
/// coordinate keeps the covered set exact (S1×T ∪ S2×T = (S1∪S2)×T).
struct Cube {
  std::vector<std::set<std::uint16_t>> allowed;  // indexed by relevant-attribute position
  std::size_t min_context = 0;                   // for deterministic ordering
};

bool covers(const Cube& big, const Cube& small) {
  for (std::size_t a = 0; a < big.allowed.size(); ++a) {
    if (!std::includes(big.allowed[a].begin(), big.allowed[a].end(),
                       small.allowed[a].begin(), small.allowed[a].end())) {
      return false;
    }
  }
  return true;
}

/// -1 if not mergeable, otherwise the single differing coordinate.
int merge_axis(const Cube& x, const Cube& y) {
  int axis = -1;
  for (std::size_t a = 0; a < x.allowed.size(); ++a) {
    if (x.allowed[a] != y.allowed[a]) {
      if (axis >= 0) return -1;
      axis = static_cast<int>(a);
    }
  }
  return axis;  // -1 here means identical; caller absorbs via covers()
}

void merge_fixpoint(std::vector<Cube>& cubes) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cubes.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < cubes.size() && !changed; ++j) {
        if (covers(cubes[i], cubes[j]) || covers(cubes[j], cubes[i])) {
          const std::size_t keep_min = std::min(cubes[i].min_context, cubes[j].min_context);
          if (covers(cubes[j], cubes[i])) cubes[i] = cubes[j];
          cubes[i].min_context = keep_min;
          cubes.erase(cubes.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
          break;
        }
        const int axis = merge_axis(cubes[i], cubes[j]);
        if (axis >= 0) {
          cubes[i].allowed[axis].insert(cubes[j].allowed[axis].begin(),
                                        cubes[j].allowed[axis].end());
          cubes[i].min_context = std::min(cubes[i].min_context, cubes[j].min_context);
          cubes.erase(cubes.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  std::sort(cubes.begin(), cubes.end(),
            [](const Cube& a, const Cube& b) { return a.min_context < b.min_context; });
}

}  // namespace

Predicate synthesize_predicate(const Universe& u, const std::vector<std::size_t>& contexts) {
  if (contexts.empty()) {
    throw Error(ErrorKind::InvalidInput, "cannot synthesize a predicate for zero contexts");
  }
  const std::set<std::size_t> members(contexts.begin(), contexts.end());

  // An attribute is irrelevant when the region is closed under swapping that
  // attribute to any other value. Factoring all of those out first
  // guarantees the predicate never mentions dimensions the region does not
  // depend on (full-domain merging, done globally).
  std::vector<std::size_t> relevant;
  for (std::size_t a = 0; a < u.attribute_count(); ++a) {
    const std::size_t domain = u.schema().attributes[a].values.size();
    bool closed = true;
    for (std::size_t idx : contexts) {
      const QueryContext ctx = u.context_at(idx);
      std::vector<std::uint16_t> values = ctx.values();
      for (std::size_t v = 0; v < domain && closed; ++v) {
        values[a] = static_cast<std::uint16_t>(v);
        if (!members.count(QueryContext(u.context_at(idx).universe_ptr(), values).index())) {
          closed = false;
        }
      }
      if (!closed) break;
    }
    if (!closed) relevant.push_back(a);
  }

  Predicate p = Predicate::always();
  if (!relevant.empty()) {
    // Project members onto the relevant attributes, then cube-merge.
    std::map<std::vector<std::uint16_t>, std::size_t> projected;  // tuple -> min context
    for (std::size_t idx : contexts) {
      const QueryContext ctx = u.context_at(idx);
      std::vector<std::uint16_t> key;
      for (std::size_t a : relevant) key.push_back(ctx.value_index(a));
      auto [it, fresh] = projected.emplace(std::move(key), idx);
      if (!fresh) it->second = std::min(it->second, idx);
    }
    std::vector<Cube> cubes;
    for (const auto& [key, min_ctx] : projected) {
      Cube c;
      for (std::uint16_t v : key) c.allowed.push_back({v});
      c.min_context = min_ctx;
      cubes.push_back(std::move(c));
    }
    merge_fixpoint(cubes);

    std::vector<Predicate> clauses;
    for (const Cube& cube : cubes) {
      std::vector<Predicate> terms;
      for (std::size_t pos = 0; pos < relevant.size(); ++pos) {
        const Attribute& attr = u.schema().attributes[relevant[pos]];
        if (cube.allowed[pos].size() == attr.values.size()) continue;
        if (cube.allowed[pos].size() == 1) {
          terms.push_back(Predicate::test(attr.name, attr.values[*cube.allowed[pos].begin()]));
        } else {
          std::vector<std::string> values;
          for (std::uint16_t v : cube.allowed[pos]) values.push_back(attr.values[v]);
          terms.push_back(Predicate::in_set(attr.name, std::move(values)));
        }
      }
      if (terms.empty()) continue;  // cube covers everything; clause list stays empty
      Predicate clause = terms.front();
      for (std::size_t i = 1; i < terms.size(); ++i) {
        clause = Predicate::conj(std::move(clause), terms[i]);
      }
      clauses.push_back(std::move(clause));
    }
    if (!clauses.empty()) {
      p = clauses.front();
      for (std::size_t i = 1; i < clauses.size(); ++i) p = Predicate::disj(std::move(p), clauses[i]);
    }
  }

  // The predicate must characterize the region exactly; verify by full
  // enumeration before anyone trusts it.
  for (std::size_t c = 0; c < u.context_count(); ++c) {
    if (p.eval(u.context_at(c)) != (members.count(c) > 0)) {
      throw std::logic_error("synthesized predicate does not characterize its region");
    }
  }
  return p;
}

NormalForm normalize(const Behavior& f) {
  const auto& u = f.universe();
  const Observable obs = observable(f);

  // Fibers of context ↦ observable row. The map key is the normalized row
  // itself; the zero row (EMPTY) forms a fiber like any other.
  std::map<OutcomeRow, std::vector<std::size_t>> fibers;
  for (std::size_t c = 0; c < u->context_count(); ++c) {
    fibers[obs.row(c)].push_back(c);
  }

  std::vector<Region> regions;
  for (const auto& [row, contexts] : fibers) {
    Region r;
    r.contexts = contexts;
    r.outcome = row;
    r.predicate = synthesize_predicate(*u, contexts);
    regions.push_back(std::move(r));
  }
  std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
    return a.contexts.front() < b.contexts.front();
  });
  return NormalForm(u, std::move(regions));
}

Behavior reconstruct(const NormalForm& nf) {
  const auto& u = nf.universe();
  Behavior acc = zero(u);
  for (const Region& r : nf.regions()) {
    Behavior sel = zero(u);
    if (!r.outcome.is_zero()) {
      std::vector<std::pair<std::vector<std::string>, Rational>> entries;
      for (const auto& [ord, w] : r.outcome.entries()) {
        entries.emplace_back(u->subset_ids(u->subset_mask(ord)), w);
      }
      sel = weighted(u, entries);
    }
    acc = add(acc, mul(gate_of(r.predicate, u), sel));
  }
  return acc;
}

std::size_t region_count(const Behavior& f) { return normalize(f).regions().size(); }

bool NormalForm::same_partition_and_outcomes(const NormalForm& other) const {
  if (!same_universe(universe_, other.universe_)) return false;
  if (regions_.size() != other.regions_.size()) return false;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].contexts != other.regions_[i].contexts) return false;
    if (!(regions_[i].outcome == other.regions_[i].outcome)) return false;
  }
  return true;
}

}  // namespace steerlab
