#include "steerlab/realization.hpp"

#include "steerlab/error.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace steerlab {

namespace {

/// Cumulative (cascade) half-up rounding of a normalized row onto the
/// quantum grid. Rounding the running sum instead of each weight keeps the
/// result summing to exactly 1 and makes the congruence idempotent: a row
/// already on the grid has integer running quotients and passes unchanged.
OutcomeRow quantize_row(const OutcomeRow& normalized, const Rational& quantum) {
  OutcomeRow out;
  Rational running = 0;
  Rational prev_grid = 0;
  for (const auto& [ord, w] : normalized.entries()) {
    running += w;
    const Rational grid = Rational(round_half_up(running / quantum)) * quantum;
    if (grid > prev_grid) out.set(ord, grid - prev_grid);
    prev_grid = grid;
  }
  return out;
}

OutcomeRow forget_row(const OutcomeRow& row) {
  OutcomeRow out;
  for (const auto& [ord, _] : row.entries()) out.set(ord, 1);
  return out;
}

OutcomeRow collapse_row(const RealizationProfile& R, const OutcomeRow& raw) {
  // No identified expressions: the congruence is trivial and every behavior
  // is its own canonical representative.
  if (!R.weight_quantum && !R.forget_distribution) return raw;
  OutcomeRow row = raw.normalized();
  if (row.is_zero()) return row;
  if (R.weight_quantum) row = quantize_row(row, *R.weight_quantum);
  if (R.forget_distribution) row = forget_row(row);
  return row;
}

/// True when the row is a sure choice of one subset.
bool is_point_mass(const OutcomeRow& row) {
  return row.support_size() == 1 && row.entries().begin()->second == 1;
}

std::string region_label(const Universe& u, const Region& r) {
  return "region [" + r.predicate.to_string() + "] (" +
         u.context_at(r.contexts.front()).to_string() + ", ...)";
}

}  // namespace

const char* to_string(SelectionKind k) {
  switch (k) {
    case SelectionKind::Fixed:
      return "fixed";
    case SelectionKind::Weighted:
      return "weighted";
    case SelectionKind::Priority:
      return "priority";
    case SelectionKind::Affinity:
      return "affinity";
  }
  return "?";
}

SelectionKind selection_kind_from_string(const std::string& name) {
  if (name == "fixed") return SelectionKind::Fixed;
  if (name == "weighted") return SelectionKind::Weighted;
  if (name == "priority") return SelectionKind::Priority;
  if (name == "affinity") return SelectionKind::Affinity;
  throw Error(ErrorKind::InvalidInput, "unknown selection kind '" + name + "'");
}

bool RealizationProfile::attribute_allowed(const std::string& attr) const {
  return !allowed_attributes || allowed_attributes->count(attr) > 0;
}

bool RealizationProfile::selection_allowed(SelectionKind k) const {
  return !allowed_selections || allowed_selections->count(k) > 0;
}

void RealizationProfile::validate() const {
  if (weight_quantum) {
    if (*weight_quantum <= 0) {
      throw Error(ErrorKind::InvalidInput, "weight_quantum must be positive");
    }
    const Rational steps = 1 / *weight_quantum;
    if (boost::multiprecision::denominator(steps) != 1) {
      // Otherwise total weight 1 is off the grid and quantization cannot be
      // idempotent.
      throw Error(ErrorKind::InvalidInput, "weight_quantum must divide 1 exactly");
    }
  }
  if (max_regions && *max_regions == 0) {
    throw Error(ErrorKind::InvalidInput, "max_regions must be at least 1");
  }
}

void RealizationProfile::validate_against(const Universe& u) const {
  validate();
  if (allowed_attributes) {
    for (const std::string& attr : *allowed_attributes) {
      u.attribute_index(attr);  // throws UnknownAttribute
    }
  }
}

AdmitResult admits(const RealizationProfile& R, const Behavior& f) {
  R.validate_against(*f.universe());
  const NormalForm nf = normalize(f);
  const Universe& u = *f.universe();

  // Restriction 1: predicates over allowed attributes only.
  for (const Region& r : nf.regions()) {
    for (const std::string& attr : r.predicate.attributes_used()) {
      if (!R.attribute_allowed(attr)) {
        return {false, region_label(u, r) + " predicate uses disallowed attribute '" + attr + "'"};
      }
    }
  }

  // Restriction 2: outcomes expressible by allowed selections. EMPTY is the
  // additive identity and belongs to every substructure.
  for (const Region& r : nf.regions()) {
    const OutcomeRow& o = r.outcome;
    if (o.is_zero()) continue;
    if (is_point_mass(o)) {
      const std::uint32_t mask = u.subset_mask(o.entries().begin()->first);
      const bool singleton = u.subset_ids(mask).size() == 1;
      bool ok = R.selection_allowed(SelectionKind::Weighted) ||
                R.selection_allowed(SelectionKind::Fixed);
      if (!ok && singleton && R.selection_allowed(SelectionKind::Affinity)) ok = true;
      if (!ok && singleton && R.selection_allowed(SelectionKind::Priority)) {
        const std::string id = u.subset_ids(mask).front();
        ok = u.candidates()[u.candidate_index(id)].metadata().health == Health::Up;
      }
      if (!ok) {
        return {false, region_label(u, r) + ": fixed outcome not expressible"};
      }
    } else if (!R.selection_allowed(SelectionKind::Weighted)) {
      return {false, region_label(u, r) + ": weighted outcome not expressible"};
    }
  }

  // Restriction 3: weights on the quantum grid.
  if (R.weight_quantum) {
    for (const Region& r : nf.regions()) {
      for (const auto& [ord, w] : r.outcome.entries()) {
        if (boost::multiprecision::denominator(Rational(w / *R.weight_quantum)) != 1) {
          return {false, region_label(u, r) + ": weight " + to_text(w) +
                             " off the quantum grid " + to_text(*R.weight_quantum)};
        }
      }
    }
  }

  // Restriction 4: region budget.
  if (R.max_regions && nf.regions().size() > *R.max_regions) {
    return {false, "region count " + std::to_string(nf.regions().size()) + " exceeds max_regions " +
                       std::to_string(*R.max_regions)};
  }
  return {true, ""};
}

Behavior collapse(const RealizationProfile& R, const Behavior& f) {
  R.validate();
  std::vector<OutcomeRow> rows;
  rows.reserve(f.rows().size());
  for (const OutcomeRow& raw : f.rows()) rows.push_back(collapse_row(R, raw));
  return Behavior::from_rows(f.universe(), std::move(rows));
}

bool exactly_representable(const RealizationProfile& R, const Behavior& f) {
  return admits(R, f).admitted && equiv(collapse(R, f), f).equal;
}

bool DistinctionSet::contains(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(a, b));
}

bool DistinctionSet::subset_of(const DistinctionSet& other) const {
  return std::includes(other.pairs.begin(), other.pairs.end(), pairs.begin(), pairs.end());
}

DistinctionSet distinctions(const Behavior& f) {
  const Observable obs = observable(f);
  DistinctionSet out;
  for (std::size_t i = 0; i < obs.context_count(); ++i) {
    for (std::size_t j = i + 1; j < obs.context_count(); ++j) {
      if (!(obs.row(i) == obs.row(j))) out.pairs.emplace_back(i, j);
    }
  }
  return out;
}

DistinctionSet preserved(const Behavior& f, const Behavior& g) {
  if (!same_universe(f.universe(), g.universe())) {
    throw Error(ErrorKind::UniverseMismatch, "preserved() needs one universe");
  }
  const Observable og = observable(g);
  DistinctionSet out;
  for (const auto& [i, j] : distinctions(f).pairs) {
    if (!(og.row(i) == og.row(j))) out.pairs.emplace_back(i, j);
  }
  return out;
}

Behavior coarsen(const RealizationProfile& R, const Behavior& f) {
  const auto& u = f.universe();
  if (!R.allowed_attributes) return f;  // every attribute allowed: identity
  bool all_allowed = true;
  for (const Attribute& a : u->schema().attributes) {
    if (!R.allowed_attributes->count(a.name)) all_allowed = false;
  }
  if (all_allowed) return f;

  // Group contexts into cylinders over the allowed attributes and average
  // the raw rows inside each cylinder. Raw averaging is linear, so this half
  // of the lowering map is exactly ⊕-compatible; any law failure later is
  // the congruence's doing.
  std::vector<std::size_t> allowed_positions;
  for (std::size_t a = 0; a < u->attribute_count(); ++a) {
    if (R.allowed_attributes->count(u->schema().attributes[a].name)) {
      allowed_positions.push_back(a);
    }
  }
  std::map<std::vector<std::uint16_t>, std::vector<std::size_t>> cylinders;
  for (std::size_t c = 0; c < u->context_count(); ++c) {
    const QueryContext ctx = u->context_at(c);
    std::vector<std::uint16_t> key;
    for (std::size_t a : allowed_positions) key.push_back(ctx.value_index(a));
    cylinders[key].push_back(c);
  }
  std::vector<OutcomeRow> rows(u->context_count());
  for (const auto& [_, members] : cylinders) {
    OutcomeRow mean;
    for (std::size_t c : members) {
      for (const auto& [ord, w] : f.row(c).entries()) {
        mean.accumulate(ord, w / Rational(members.size()));
      }
    }
    for (std::size_t c : members) rows[c] = mean;
  }
  return Behavior::from_rows(u, std::move(rows));
}

Behavior lower_map(const RealizationProfile& R, const Behavior& f) {
  return collapse(R, coarsen(R, f));
}

std::vector<Behavior> admissible_gates(const RealizationProfile& R,
                                       const std::shared_ptr<const Universe>& u) {
  std::vector<Behavior> gates;
  gates.push_back(gate_of(Predicate::always(), u));
  gates.push_back(gate_of(Predicate::never(), u));
  for (const Attribute& a : u->schema().attributes) {
    if (!R.attribute_allowed(a.name)) continue;
    for (const std::string& v : a.values) {
      gates.push_back(gate_of(Predicate::test(a.name, v), u));
    }
  }
  return gates;
}

std::vector<Behavior> generate_subalgebra(const std::vector<Behavior>& seeds,
                                          std::size_t max_size) {
  if (seeds.empty()) {
    throw Error(ErrorKind::InvalidInput, "subalgebra generation needs at least one seed");
  }
  std::vector<Behavior> out;
  std::map<std::vector<OutcomeRow>, std::size_t> known;  // raw rows -> index
  auto push = [&](const Behavior& b) {
    if (out.size() >= max_size) return;
    if (known.emplace(b.rows(), out.size()).second) out.push_back(b);
  };
  for (const Behavior& s : seeds) {
    if (!same_universe(s.universe(), seeds.front().universe())) {
      throw Error(ErrorKind::UniverseMismatch, "subalgebra seeds span universes");
    }
    push(s);
  }
  // Grow in passes: combine every ordered pair of the current set under ⊕
  // and ⊗, in index order, until a pass adds nothing or the cap is hit.
  bool grew = true;
  while (grew && out.size() < max_size) {
    grew = false;
    const std::size_t snapshot = out.size();
    for (std::size_t i = 0; i < snapshot && out.size() < max_size; ++i) {
      for (std::size_t j = 0; j < snapshot && out.size() < max_size; ++j) {
        const std::size_t before = out.size();
        push(add(out[i], out[j]));
        push(mul(out[i], out[j]));
        if (out.size() != before) grew = true;
      }
    }
  }
  return out;
}

LowerResult lowerable(const RealizationProfile& R, const Behavior& f, std::size_t trials,
                      std::uint64_t seed) {
  R.validate_against(*f.universe());
  if (trials == 0) {
    throw Error(ErrorKind::InvalidInput, "lowerable needs at least one trial");
  }
  LowerResult result;
  result.image = lower_map(R, f);

  std::vector<Behavior> seeds;
  seeds.push_back(f);
  for (Behavior& g : admissible_gates(R, f.universe())) seeds.push_back(std::move(g));

  // Keep the generated set small enough that `trials` usually covers all
  // pairs under both laws; report the scope either way.
  std::size_t cap = seeds.size();
  while ((cap + 1) * (cap + 1) * 2 <= trials) ++cap;
  cap = std::max(cap, seeds.size());
  const std::vector<Behavior> sub = generate_subalgebra(seeds, cap);
  result.subalgebra_size = sub.size();

  std::vector<Behavior> images;
  images.reserve(sub.size());
  for (const Behavior& b : sub) images.push_back(lower_map(R, b));

  // One trial = one (a, b, law) triple, evaluated in the quotient algebra:
  // h(a∘b) must match collapse(h(a)∘h(b)) observably.
  auto run_trial = [&](std::size_t i, std::size_t j, bool is_add) -> bool {
    const Behavior lhs = lower_map(R, is_add ? add(sub[i], sub[j]) : mul(sub[i], sub[j]));
    const Behavior rhs =
        collapse(R, is_add ? add(images[i], images[j]) : mul(images[i], images[j]));
    const EquivResult eq = equiv(lhs, rhs);
    if (!eq.equal) {
      result.counterexample =
          LawCounterexample{sub[i], sub[j], is_add ? "add" : "mul", *eq.witness};
    }
    return eq.equal;
  };

  const std::size_t exhaustive_count = sub.size() * sub.size() * 2;
  if (exhaustive_count <= trials) {
    result.exhaustive = true;
    for (std::size_t i = 0; i < sub.size() && !result.counterexample; ++i) {
      for (std::size_t j = 0; j < sub.size() && !result.counterexample; ++j) {
        ++result.trials_run;
        if (!run_trial(i, j, true)) break;
        ++result.trials_run;
        run_trial(i, j, false);
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, sub.size() - 1);
    for (std::size_t t = 0; t < trials && !result.counterexample; ++t) {
      ++result.trials_run;
      run_trial(pick(rng), pick(rng), (rng() & 1) == 0);
    }
  }

  if (result.counterexample) {
    result.verdict = Verdict::No;
    result.reason = "homomorphism law '" + result.counterexample->law +
                    "' fails at context " + result.counterexample->witness.to_string();
    return result;
  }

  // Membership: the image must occur among the generated approximations.
  bool member = false;
  for (const Approximation& a : approximations(R, f)) {
    if (equiv(a.behavior, *result.image).equal) {
      member = true;
      break;
    }
  }
  if (!member) {
    result.verdict = Verdict::No;
    result.reason = "laws hold but h(f) is not among the generated approximations";
    return result;
  }
  result.verdict = Verdict::Yes;
  result.reason = "laws hold on the generated subalgebra and h(f) is an approximation";
  return result;
}

std::vector<Approximation> approximations(const RealizationProfile& R, const Behavior& f) {
  R.validate_against(*f.universe());
  const auto& u = f.universe();
  const Observable obs = observable(f);

  // Blocks: partition join (union-find) of the fiber partition with the
  // allowed-attribute cylinder partition. Each block is a union of
  // cylinders, so block-constant candidates stay expressible over allowed
  // attributes.
  std::vector<std::size_t> parent(u->context_count());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

  {
    std::map<OutcomeRow, std::size_t> first_of_fiber;
    std::map<std::vector<std::uint16_t>, std::size_t> first_of_cylinder;
    for (std::size_t c = 0; c < u->context_count(); ++c) {
      auto [fit, fresh_f] = first_of_fiber.emplace(obs.row(c), c);
      if (!fresh_f) unite(c, fit->second);
      const QueryContext ctx = u->context_at(c);
      std::vector<std::uint16_t> key;
      for (std::size_t a = 0; a < u->attribute_count(); ++a) {
        if (R.attribute_allowed(u->schema().attributes[a].name)) {
          key.push_back(ctx.value_index(a));
        }
      }
      auto [cit, fresh_c] = first_of_cylinder.emplace(std::move(key), c);
      if (!fresh_c) unite(c, cit->second);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> blocks_by_root;
  for (std::size_t c = 0; c < u->context_count(); ++c) blocks_by_root[find(c)].push_back(c);
  std::vector<std::vector<std::size_t>> blocks;
  for (auto& [_, members] : blocks_by_root) blocks.push_back(std::move(members));
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  // Per-block outcome choices: context-count-weighted average, majority row
  // (ties to the earliest), and one point mass per supported subset.
  std::vector<std::vector<OutcomeRow>> choices;
  for (const std::vector<std::size_t>& block : blocks) {
    std::vector<OutcomeRow> opts;
    auto push_opt = [&](const OutcomeRow& row) {
      if (std::find(opts.begin(), opts.end(), row) == opts.end()) opts.push_back(row);
    };
    OutcomeRow mean;
    for (std::size_t c : block) {
      for (const auto& [ord, w] : obs.row(c).entries()) {
        mean.accumulate(ord, w / Rational(block.size()));
      }
    }
    push_opt(mean);
    std::map<OutcomeRow, std::size_t> freq;
    for (std::size_t c : block) ++freq[obs.row(c)];
    const OutcomeRow* majority = nullptr;
    std::size_t best = 0;
    for (std::size_t c : block) {  // earliest-context tie-break
      const OutcomeRow& row = obs.row(c);
      if (freq[row] > best) {
        best = freq[row];
        majority = &row;
      }
    }
    push_opt(*majority);
    std::set<std::size_t> support;
    for (std::size_t c : block) {
      for (const auto& [ord, _] : obs.row(c).entries()) support.insert(ord);
    }
    for (std::size_t ord : support) {
      OutcomeRow point;
      point.set(ord, 1);
      push_opt(point);
    }
    choices.push_back(std::move(opts));
  }

  // Candidate behaviors: the cartesian product of per-block choices, capped;
  // past the cap, fall back to the two strategy-uniform candidates.
  constexpr std::size_t kProductCap = 4096;
  std::size_t product = 1;
  bool overflow = false;
  for (const auto& opts : choices) {
    if (product > kProductCap / opts.size()) {
      overflow = true;
      break;
    }
    product *= opts.size();
  }

  std::vector<Behavior> raw_candidates;
  auto assemble = [&](const std::vector<std::size_t>& pick) {
    std::vector<OutcomeRow> rows(u->context_count());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (std::size_t c : blocks[b]) rows[c] = choices[b][pick[b]];
    }
    raw_candidates.push_back(Behavior::from_rows(u, std::move(rows)));
  };
  if (!overflow) {
    std::vector<std::size_t> pick(blocks.size(), 0);
    bool done = false;
    while (!done) {
      assemble(pick);
      done = true;
      for (std::size_t pos = blocks.size(); pos-- > 0;) {
        if (++pick[pos] < choices[pos].size()) {
          done = false;
          break;
        }
        pick[pos] = 0;
      }
    }
  } else {
    assemble(std::vector<std::size_t>(blocks.size(), 0));  // average everywhere
    std::vector<std::size_t> pick;
    for (const auto& opts : choices) {
      pick.push_back(opts.size() > 1 ? 1 : 0);  // majority everywhere
    }
    assemble(pick);
  }
  raw_candidates.push_back(coarsen(R, f));  // the lowering image joins the pool

  // Collapse into the congruence, keep the admitted, deduplicate observably.
  std::vector<Behavior> kept;
  for (const Behavior& cand : raw_candidates) {
    Behavior g = collapse(R, cand);
    if (!admits(R, g).admitted) continue;
    bool dup = false;
    for (const Behavior& existing : kept) {
      if (equiv(existing, g).equal) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(g));
  }

  std::vector<Approximation> out;
  for (Behavior& g : kept) {
    DistinctionSet p = preserved(f, g);
    out.push_back(Approximation{std::move(g), std::move(p), false});
  }
  // Most-preserving first; stable on generation order for ties.
  std::stable_sort(out.begin(), out.end(), [](const Approximation& a, const Approximation& b) {
    return a.preserved_distinctions.size() > b.preserved_distinctions.size();
  });
  for (Approximation& a : out) {
    a.minimal = true;
    for (const Approximation& other : out) {
      if (&other != &a && a.preserved_distinctions.subset_of(other.preserved_distinctions) &&
          !(other.preserved_distinctions == a.preserved_distinctions)) {
        a.minimal = false;  // somebody preserves strictly more
        break;
      }
    }
  }
  return out;
}

IrreversibilityReport check_irreversibility(const RealizationProfile& R, const Behavior& f,
                                            const Behavior& f_prime, std::size_t max_terms) {
  R.validate_against(*f.universe());
  IrreversibilityReport report;
  report.identified =
      !equiv(f, f_prime).equal && equiv(collapse(R, f), collapse(R, f_prime)).equal;
  if (!report.identified) return report;

  const std::vector<Behavior> gates = admissible_gates(R, f.universe());
  const std::vector<Behavior> terms = generate_subalgebra(gates, max_terms);
  for (const Behavior& g : gates) {
    for (const Behavior& k : terms) {
      ++report.terms_checked;
      const Behavior left = collapse(R, add(mul(g, f), k));
      const Behavior right = collapse(R, add(mul(g, f_prime), k));
      if (!equiv(left, right).equal) {
        report.separating_gate = g;
        report.separating_term = k;
        return report;
      }
    }
  }
  report.irreversible = true;
  return report;
}

}  // namespace steerlab
