#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "steerlab/error.hpp"
#include "steerlab/random_gen.hpp"
#include "steerlab/realization.hpp"

#include <random>

using namespace steerlab;

TEST_CASE("profile invariants") {
  RealizationProfile R;
  R.weight_quantum = Rational(2, 3);  // 1/(2/3) is not an integer
  CHECK_THROWS_AS(R.validate(), Error);
  R.weight_quantum = Rational(0);
  CHECK_THROWS_AS(R.validate(), Error);
  R.weight_quantum = Rational(-1, 2);
  CHECK_THROWS_AS(R.validate(), Error);
  R.weight_quantum = Rational(1, 3);
  CHECK_NOTHROW(R.validate());

  R.max_regions = 0;
  CHECK_THROWS_AS(R.validate(), Error);
  R.max_regions = 1;
  CHECK_NOTHROW(R.validate());

  R.allowed_attributes = std::set<std::string>{"bogus"};
  CHECK_THROWS_AS(R.validate_against(*fixtures::u0()), Error);
}

TEST_CASE("admits checks the four restrictions in order") {
  const auto u = fixtures::u0();
  const Behavior geo = fixtures::p_geo(u);
  const Behavior w = fixtures::p_w(u);

  SUBCASE("selection restriction") {
    const auto R = fixtures::single_answer_profile();
    CHECK(admits(R, geo).admitted);
    const AdmitResult r = admits(R, w);
    CHECK_FALSE(r.admitted);
    CHECK(r.diagnosis.find("weighted outcome not expressible") != std::string::npos);
  }

  SUBCASE("quantum grid restriction") {
    const auto R = fixtures::quantum_half_profile();
    const AdmitResult r = admits(R, w);
    CHECK_FALSE(r.admitted);
    CHECK(r.diagnosis.find("off the quantum grid") != std::string::npos);
    CHECK(admits(R, collapse(R, w)).admitted);  // the collapsed image lies on the grid
    CHECK(admits(R, geo).admitted);             // point masses are grid points
  }

  SUBCASE("attribute restriction") {
    const auto R = fixtures::attribute_free_profile();
    const AdmitResult r = admits(R, geo);
    CHECK_FALSE(r.admitted);
    CHECK(r.diagnosis.find("disallowed attribute 'region'") != std::string::npos);
    CHECK(admits(R, w).admitted);  // constant behaviors need no attributes
  }

  SUBCASE("region budget") {
    RealizationProfile R;
    R.max_regions = 1;
    const AdmitResult r = admits(R, geo);
    CHECK_FALSE(r.admitted);
    CHECK(r.diagnosis.find("max_regions") != std::string::npos);
    CHECK(admits(R, w).admitted);
  }

  SUBCASE("congruence-only profiles forbid nothing") {
    CHECK(admits(fixtures::forget_profile(), w).admitted);
    CHECK(admits(fixtures::quantum_half_profile(), collapse(fixtures::quantum_half_profile(), w))
              .admitted);
  }

  SUBCASE("EMPTY belongs to every substructure") {
    auto R = fixtures::single_answer_profile();
    CHECK(admits(R, zero(u)).admitted);
    R.allowed_selections = std::set<SelectionKind>{};  // no selection at all
    CHECK(admits(R, zero(u)).admitted);
    CHECK_FALSE(admits(R, geo).admitted);
  }

  SUBCASE("priority and affinity express healthy singletons only") {
    RealizationProfile prio;
    prio.allowed_selections = std::set<SelectionKind>{SelectionKind::Priority};
    CHECK(admits(prio, geo).admitted);            // singleton point masses, all healthy
    CHECK_FALSE(admits(prio, fixed(u, {"a1", "a2"})).admitted);  // pair subset

    AttributeSchema schema;
    schema.attributes.push_back({"k", {"x"}});
    const auto v = Universe::create(
        schema, {fixtures::make_candidate("d1", 1, 60, Health::Down),
                 fixtures::make_candidate("d2", 2, 60, Health::Up)});
    CHECK_FALSE(admits(prio, fixed(v, {"d1"})).admitted);  // down candidate
    CHECK(admits(prio, fixed(v, {"d2"})).admitted);
  }
}

TEST_CASE("collapse: frozen quantization values") {
  const auto u = fixtures::u0();
  const auto R = fixtures::quantum_half_profile();

  // P_w (1/4, 3/4) and P_w' (1/3, 2/3) collapse to the same (1/2, 1/2) row.
  const Behavior cw = collapse(R, fixtures::p_w(u));
  const Behavior cw2 = collapse(R, fixtures::p_w2(u));
  for (std::size_t c = 0; c < u->context_count(); ++c) {
    CHECK(cw.row(c).get(1) == Rational(1, 2));
    CHECK(cw.row(c).get(2) == Rational(1, 2));
    CHECK(cw.row(c).support_size() == 2);
  }
  CHECK(cw.raw_equal(cw2));
  CHECK(equiv(cw, cw2).equal);
  CHECK_FALSE(equiv(fixtures::p_w(u), fixtures::p_w2(u)).equal);

  // one(): normalized uniform over 4 subsets; the running sum rounds at the
  // 1st and 3rd subset, so the mass lands on ordinals 0 and 2.
  const Behavior co = collapse(R, one(u));
  CHECK(co.row(0).get(0) == Rational(1, 2));
  CHECK(co.row(0).get(2) == Rational(1, 2));
  CHECK(co.row(0).support_size() == 2);

  // Quantized rows still sum to exactly 1.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_universe(rng);
    const Behavior f = random_behavior(rng, v);
    const Behavior cf = collapse(fixtures::quantum_half_profile(), f);
    for (std::size_t c = 0; c < v->context_count(); ++c) {
      if (!f.row(c).is_zero()) CHECK(cf.row(c).total() == 1);
    }
  }
}

TEST_CASE("collapse: support forgetting and composition order") {
  const auto u = fixtures::u0();

  const Behavior fw = collapse(fixtures::forget_profile(), fixtures::p_w(u));
  CHECK(fw.row(0).get(1) == 1);
  CHECK(fw.row(0).get(2) == 1);

  // Quantize-then-forget: 1/8+1/8+3/4 over three subsets first rounds to
  // (0, 1/2, 1/2), so the first subset leaves the support.
  AttributeSchema schema;
  schema.attributes.push_back({"k", {"x"}});
  const auto v = Universe::create(
      schema, {fixtures::make_candidate("b1", 1), fixtures::make_candidate("b2", 2)});
  const Behavior f = weighted(v, {{{"b1"}, Rational(1, 8)},
                                  {{"b2"}, Rational(1, 8)},
                                  {{"b1", "b2"}, Rational(3, 4)}});
  RealizationProfile both = fixtures::quantum_half_profile();
  both.forget_distribution = true;
  const Behavior cf = collapse(both, f);
  CHECK(cf.row(0).get(1) == 0);  // {b1} rounded away before forgetting
  CHECK(cf.row(0).get(2) == 1);  // {b2}
  CHECK(cf.row(0).get(3) == 1);  // {b1,b2}
}

TEST_CASE("collapse is idempotent for every profile shape") {
  std::mt19937_64 rng(123);
  const std::vector<RealizationProfile> profiles = {
      fixtures::identity_profile(), fixtures::quantum_half_profile(),
      fixtures::forget_profile(), fixtures::single_answer_profile(),
      fixtures::attribute_free_profile()};
  for (int trial = 0; trial < 60; ++trial) {
    const auto u = random_universe(rng);
    const Behavior f = random_behavior(rng, u);
    for (const auto& R : profiles) {
      const Behavior once = collapse(R, f);
      CHECK(collapse(R, once).raw_equal(once));
    }
  }
}

TEST_CASE("exact representability") {
  const auto u = fixtures::u0();
  const Behavior geo = fixtures::p_geo(u);
  const Behavior w = fixtures::p_w(u);

  CHECK(exactly_representable(fixtures::single_answer_profile(), geo));
  CHECK_FALSE(exactly_representable(fixtures::single_answer_profile(), w));
  CHECK_FALSE(exactly_representable(fixtures::quantum_half_profile(), w));
  CHECK(exactly_representable(fixtures::quantum_half_profile(),
                              collapse(fixtures::quantum_half_profile(), w)));
  CHECK(exactly_representable(fixtures::forget_profile(), geo));
  CHECK_FALSE(exactly_representable(fixtures::forget_profile(), w));
  CHECK(exactly_representable(fixtures::identity_profile(), w));
}

TEST_CASE("distinctions and preservation") {
  const auto u = fixtures::u0();
  const Behavior geo = fixtures::p_geo(u);

  const DistinctionSet d = distinctions(geo);
  REQUIRE(d.size() == 4);
  CHECK(d.contains(0, 2));
  CHECK(d.contains(0, 3));
  CHECK(d.contains(1, 2));
  CHECK(d.contains(1, 3));
  CHECK_FALSE(d.contains(0, 1));

  CHECK(distinctions(fixtures::p_w(u)).size() == 0);

  // preserved(f, g) is always a subset of distinctions(f).
  std::mt19937_64 rng(321);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_universe(rng);
    const Behavior f = random_behavior(rng, v);
    const Behavior g = random_behavior(rng, v);
    CHECK(preserved(f, g).subset_of(distinctions(f)));
  }

  // g = f preserves everything.
  CHECK(preserved(geo, geo) == d);
}

TEST_CASE("approximations: two incomparable minimal constants for P_w") {
  const auto u = fixtures::u0();
  const auto R = fixtures::single_answer_profile();
  const Behavior w = fixtures::p_w(u);

  const auto list = approximations(R, w);
  REQUIRE(list.size() == 2);
  for (const auto& a : list) {
    CHECK(a.minimal);
    CHECK(a.preserved_distinctions.size() == 0);  // P_w makes no distinctions
    CHECK(admits(R, a.behavior).admitted);
    const NormalForm nf = normalize(a.behavior);
    REQUIRE(nf.regions().size() == 1);
    CHECK(nf.regions()[0].outcome.support_size() == 1);  // a point mass
  }
  // The two candidates are observably different: neither dominates.
  CHECK_FALSE(equiv(list[0].behavior, list[1].behavior).equal);
}

TEST_CASE("approximations: attribute-free profile erases all distinctions of P_geo") {
  const auto u = fixtures::u0();
  const auto R = fixtures::attribute_free_profile();
  const Behavior geo = fixtures::p_geo(u);

  REQUIRE(distinctions(geo).size() == 4);
  const auto list = approximations(R, geo);
  REQUIRE_FALSE(list.empty());
  for (const auto& a : list) {
    CHECK(a.preserved_distinctions.size() == 0);
    CHECK(admits(R, a.behavior).admitted);
    CHECK(normalize(a.behavior).regions().size() == 1);  // constants only
  }
}

TEST_CASE("approximations: the identity profile recovers the behavior itself") {
  const auto u = fixtures::u0();
  const Behavior geo = fixtures::p_geo(u);
  const auto list = approximations(fixtures::identity_profile(), geo);
  REQUIRE_FALSE(list.empty());
  CHECK(list.front().preserved_distinctions.size() == 4);
  CHECK(equiv(list.front().behavior, geo).equal);
  CHECK(list.front().minimal);
}

TEST_CASE("approximation lists are ranked and consistently flagged") {
  std::mt19937_64 rng(555);
  const std::vector<RealizationProfile> profiles = {
      fixtures::single_answer_profile(), fixtures::quantum_half_profile(),
      fixtures::attribute_free_profile(), fixtures::forget_profile()};
  for (int trial = 0; trial < 40; ++trial) {
    const auto u = random_universe(rng);
    const Behavior f = random_behavior(rng, u);
    for (const auto& R : profiles) {
      const auto list = approximations(R, f);
      for (std::size_t i = 0; i + 1 < list.size(); ++i) {
        CHECK(list[i].preserved_distinctions.size() >= list[i + 1].preserved_distinctions.size());
      }
      for (const auto& a : list) {
        CHECK(admits(R, a.behavior).admitted);
        CHECK(a.preserved_distinctions.subset_of(distinctions(f)));
        // minimal iff no other candidate preserves a strict superset
        bool dominated = false;
        for (const auto& b : list) {
          if (&b != &a && a.preserved_distinctions.subset_of(b.preserved_distinctions) &&
              b.preserved_distinctions.size() > a.preserved_distinctions.size()) {
            dominated = true;
          }
        }
        CHECK(a.minimal == !dominated);
      }
    }
  }
}

TEST_CASE("coarsen averages raw rows over allowed cylinders") {
  const auto u = fixtures::u0();
  const Behavior geo = fixtures::p_geo(u);

  CHECK(coarsen(fixtures::identity_profile(), geo).raw_equal(geo));

  const Behavior flat = coarsen(fixtures::attribute_free_profile(), geo);
  for (std::size_t c = 0; c < u->context_count(); ++c) {
    CHECK(flat.row(c).get(1) == Rational(1, 2));  // mean of the four point masses
    CHECK(flat.row(c).get(2) == Rational(1, 2));
  }

  SUBCASE("coarsening is additive (raw averaging is ⊕-linear)") {
    std::mt19937_64 rng(888);
    RealizationProfile R;
    for (int trial = 0; trial < 60; ++trial) {
      const auto v = random_universe(rng);
      R.allowed_attributes =
          (trial % 2) ? std::set<std::string>{v->schema().attributes.front().name}
                      : std::set<std::string>{};
      const Behavior f = random_behavior(rng, v);
      const Behavior g = random_behavior(rng, v);
      CHECK(coarsen(R, add(f, g)).raw_equal(add(coarsen(R, f), coarsen(R, g))));
    }
  }
}

TEST_CASE("lowerable: yes verdicts") {
  const auto u = fixtures::u0();
  const Behavior geo = fixtures::p_geo(u);

  SUBCASE("identity profile is trivially a homomorphism") {
    const LowerResult r = lowerable(fixtures::identity_profile(), geo, 600, 1);
    CHECK(r.verdict == Verdict::Yes);
    CHECK(r.exhaustive);
    CHECK(r.subalgebra_size > 0);
    REQUIRE(r.image.has_value());
    CHECK(equiv(*r.image, geo).equal);
  }

  SUBCASE("support forgetting is a homomorphism on the geo subalgebra") {
    const LowerResult r = lowerable(fixtures::forget_profile(), geo, 600, 1);
    CHECK(r.verdict == Verdict::Yes);
    CHECK(r.exhaustive);
    CHECK_FALSE(r.counterexample.has_value());
  }
}

TEST_CASE("lowerable: quantization breaks the homomorphism laws, with replayable witness") {
  const auto u = fixtures::u0();
  const auto R = fixtures::quantum_half_profile();
  const Behavior w = fixtures::p_w(u);

  const LowerResult r = lowerable(R, w, 600, 1);
  REQUIRE(r.verdict == Verdict::No);
  REQUIRE(r.counterexample.has_value());
  const LawCounterexample& cx = *r.counterexample;

  // Replay the counterexample through the library and reproduce the failure.
  const Behavior lhs = cx.law == "add" ? add(cx.lhs_operand, cx.rhs_operand)
                                       : mul(cx.lhs_operand, cx.rhs_operand);
  const Behavior through_h = lower_map(R, lhs);
  const Behavior images_combined =
      cx.law == "add" ? add(lower_map(R, cx.lhs_operand), lower_map(R, cx.rhs_operand))
                      : mul(lower_map(R, cx.lhs_operand), lower_map(R, cx.rhs_operand));
  const EquivResult replay = equiv(through_h, collapse(R, images_combined));
  REQUIRE_FALSE(replay.equal);
  CHECK(replay.witness->index() == cx.witness.index());
}

TEST_CASE("lowerable scope accounting is deterministic") {
  const auto u = fixtures::u0();
  const Behavior geo = fixtures::p_geo(u);
  const LowerResult a = lowerable(fixtures::forget_profile(), geo, 64, 9);
  const LowerResult b = lowerable(fixtures::forget_profile(), geo, 64, 9);
  CHECK(a.verdict == b.verdict);
  CHECK(a.trials_run == b.trials_run);
  CHECK(a.subalgebra_size == b.subalgebra_size);
  CHECK_FALSE(a.exhaustive);  // 64 trials cannot cover the 15-element closure
}

TEST_CASE("admissible gates and subalgebra generation") {
  const auto u = fixtures::u0();
  CHECK(admissible_gates(fixtures::identity_profile(), u).size() == 6);  // true,false,4 tests
  CHECK(admissible_gates(fixtures::attribute_free_profile(), u).size() == 2);

  const auto seeds = admissible_gates(fixtures::identity_profile(), u);
  const auto closed = generate_subalgebra(seeds, 200);
  CHECK(closed.size() >= seeds.size());
  CHECK(closed.size() <= 200);
  const auto closed_again = generate_subalgebra(seeds, 200);
  REQUIRE(closed.size() == closed_again.size());
  for (std::size_t i = 0; i < closed.size(); ++i) {
    CHECK(closed[i].raw_equal(closed_again[i]));  // deterministic order
  }
}

TEST_CASE("collapse irreversibility for the identified pair") {
  const auto u = fixtures::u0();
  const auto R = fixtures::quantum_half_profile();

  const IrreversibilityReport rep =
      check_irreversibility(R, fixtures::p_w(u), fixtures::p_w2(u), 2000);
  CHECK(rep.identified);
  CHECK(rep.irreversible);
  CHECK(rep.terms_checked > 0);
  CHECK_FALSE(rep.separating_gate.has_value());

  SUBCASE("a non-identified pair reports identified=false") {
    const IrreversibilityReport other =
        check_irreversibility(R, fixtures::p_geo(u), fixtures::p_w(u), 100);
    CHECK_FALSE(other.identified);
  }
}
