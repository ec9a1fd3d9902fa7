#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "steerlab/error.hpp"
#include "steerlab/normalform.hpp"
#include "steerlab/text.hpp"

#include <string>
#include <vector>

using namespace steerlab;

namespace {

std::vector<std::string> policy_corpus() {
  const std::vector<std::string> bases = {
      "zero",
      "one",
      "fixed {}",
      "fixed {a1}",
      "fixed{a2,a1}",
      "weighted {{a1}: 1/4, {a2}: 3/4}",
      "weighted {{}: 1, {a1, a2}: 3}",
      "priority [a1, a2]",
      "priority [a2]",
      "affinity(region)",
      "affinity( qtype )",
  };
  const std::vector<std::string> preds = {
      "region = NA",
      "qtype=AAAA",
      "region in {NA, EU}",
      "region = NA and qtype = A",
      "region = NA or qtype = A and region = EU",
      "not region = EU",
      "not (region = NA or qtype = AAAA)",
      "(region = NA or qtype = A) and not qtype = AAAA",
      "true",
      "false",
      "region in {EU} or true and not false",
  };
  std::vector<std::string> corpus = bases;
  for (const std::string& p : preds) {
    corpus.push_back("when " + p + " apply fixed {a1}");
  }
  for (std::size_t i = 0; i + 1 < bases.size(); i += 2) {
    corpus.push_back("merge(" + bases[i] + ", " + bases[i + 1] + ")");
  }
  corpus.push_back("merge(when region = NA apply fixed{a1}, when region = EU apply fixed{a2})");
  corpus.push_back("when region = NA apply when qtype = A apply weighted {{a1}: 1, {a2}: 1}");
  corpus.push_back("merge(zero, merge(one, when true apply priority [a1]))");
  corpus.push_back("when region in {NA,EU} apply merge(affinity(region), fixed {})");
  corpus.push_back(
      "merge(when region = NA and qtype = A apply fixed {a1},\n"
      "      when region = NA and qtype = AAAA apply fixed {a2},\n"
      "      when region = EU apply weighted {{a1}: 1/2, {a2}: 1/2})");
  corpus.push_back("# leading comment\nwhen region = NA # trailing comment\napply one");
  for (const std::string& p : {"region = NA", "qtype = AAAA and region = EU"}) {
    corpus.push_back("merge(when " + p + " apply zero, when not (" + p + ") apply one)");
  }
  while (corpus.size() < 50) {
    corpus.push_back("when region = NA apply fixed {a" +
                     std::to_string(corpus.size() % 2 + 1) + "}");
  }
  return corpus;
}

}  // namespace

TEST_CASE("policy parse→print→parse is a fixpoint across the corpus") {
  const auto corpus = policy_corpus();
  REQUIRE(corpus.size() >= 50);
  for (const std::string& text : corpus) {
    CAPTURE(text);
    const std::string once = print_policy(parse_policy(text));
    const std::string twice = print_policy(parse_policy(once));
    CHECK(once == twice);
  }
}

TEST_CASE("parsed policies elaborate to the hand-built behaviors") {
  const auto u = fixtures::u0();

  const PolicyDocument geo = parse_policy(
      "merge(when region=NA apply fixed{a1}, when region=EU apply fixed{a2})");
  CHECK(equiv(elaborate(geo, u), fixtures::p_geo(u)).equal);

  const PolicyDocument gated = parse_policy("when region = NA apply fixed {a1}");
  CHECK(elaborate(gated, u)
            .raw_equal(mul(gate_of(Predicate::test("region", "NA"), u), fixed(u, {"a1"}))));

  const PolicyDocument w = parse_policy("weighted {{a1}: 1/4, {a2}: 3/4}");
  CHECK(elaborate(w, u).raw_equal(fixtures::p_w(u)));
}

TEST_CASE("canonical printing sorts ids and normalizes spacing") {
  CHECK(print_policy(parse_policy("fixed{a2,a1}")) == "fixed {a1, a2}\n");
  CHECK(print_policy(parse_policy("weighted {{a2, a1}: 1/2, {}: 1/2}")) ==
        "weighted {{a1, a2}: 1/2, {}: 1/2}\n");
  CHECK(print_policy(parse_policy("priority [a2, a1]")) == "priority [a2, a1]\n");  // order is meaning
  CHECK(print_policy(parse_policy("affinity( region )")) == "affinity(region)\n");
  CHECK(print_policy(parse_policy("when region=NA and qtype=A or true apply zero")) ==
        "when region = NA and qtype = A or true apply zero\n");
  CHECK(print_policy(parse_policy("when (region = NA or qtype = A) and true apply one")) ==
        "when (region = NA or qtype = A) and true apply one\n");
}

TEST_CASE("product is gated behind extended algebra") {
  CHECK_THROWS_WITH_AS(parse_policy("product(one, zero)"),
                       doctest::Contains("--extended-algebra"), Error);
  const PolicyDocument doc = parse_policy("product(one, fixed {a1})", /*extended=*/true);
  const auto u = fixtures::u0();
  CHECK(elaborate(doc, u).raw_equal(mul(one(u), fixed(u, {"a1"}))));
  CHECK(print_policy(doc) == "product(one, fixed {a1})\n");
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_policy("merge(one,\n  fixed {a1)");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_policy("when region = NA"), Error);       // missing apply
  CHECK_THROWS_AS(parse_policy("one two"), Error);                // trailing input
  CHECK_THROWS_AS(parse_policy("weighted {}"), Error);            // no entries
  CHECK_THROWS_AS(parse_policy("priority []"), Error);            // no candidates
  CHECK_THROWS_AS(parse_policy("fixed {a1"), Error);              // unterminated
}

TEST_CASE("semantic errors name the offender") {
  const auto u = fixtures::u0();
  try {
    elaborate(parse_policy("fixed {a9}"), u);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownCandidate);
    CHECK(std::string(e.what()).find("a9") != std::string::npos);
  }
  try {
    elaborate(parse_policy("when planet = mars apply one"), u);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownAttribute);
    CHECK(std::string(e.what()).find("planet") != std::string::npos);
  }
}

TEST_CASE("universe text round-trips") {
  const auto u = fixtures::u0();
  const std::string text = print_universe(*u, "u0");
  const auto back = parse_universe(text);
  CHECK(same_universe(u, back));
  CHECK(print_universe(*back, "u0") == text);

  SUBCASE("metadata fields and AAAA rdata") {
    const std::string custom = R"(
universe demo {
  schema { k: [x, y] }
  candidates {
    v6 { rrtype: AAAA  ttl: 120  rdata: ["2001:0db8:0000:0000:0000:0000:0000:0001"]
         weight: 2/3  priority: 5  tag: canary  health: down }
  }
}
)";
    const auto v = parse_universe(custom);
    const Candidate& c = v->candidates().front();
    CHECK(c.rrtype() == RrType::AAAA);
    CHECK(c.ttl() == 120);
    REQUIRE(c.rdata().front().size() == 16);
    CHECK(c.rdata().front()[1] == 0x20 - 0x20 + 0x01);  // 0x20 0x01 leads
    CHECK(c.rdata().front()[0] == 0x20);
    CHECK(c.rdata().front()[15] == 0x01);
    CHECK(c.metadata().weight == Rational(2, 3));
    CHECK(c.metadata().priority == 5);
    CHECK(c.metadata().tag == "canary");
    CHECK(c.metadata().health == Health::Down);
    const std::string printed = print_universe(*v, "demo");
    CHECK(print_universe(*parse_universe(printed), "demo") == printed);
  }

  SUBCASE("health accepts either case; bad values are named") {
    const auto v = parse_universe(
        "universe x { schema { k: [x] } candidates { "
        "a { rrtype: A ttl: 60 rdata: [\"1.2.3.4\"] health: Down } } }");
    CHECK(v->candidates().front().metadata().health == Health::Down);
    CHECK_THROWS_WITH_AS(
        parse_universe("universe x { schema { k: [x] } candidates { "
                       "a { rrtype: A ttl: 60 rdata: [\"1.2.3.4\"] health: sideways } } }"),
        doctest::Contains("got 'sideways'"), Error);
  }

  SUBCASE("malformed rdata is rejected") {
    CHECK_THROWS_AS(parse_universe("universe x { schema { k: [x] } candidates { "
                                   "a { rrtype: A ttl: 60 rdata: [\"1.2.3\"] } } }"),
                    Error);
    CHECK_THROWS_AS(parse_universe("universe x { schema { k: [x] } candidates { "
                                   "a { rrtype: A ttl: 60 rdata: [\"1.2.3.999\"] } } }"),
                    Error);
    CHECK_THROWS_AS(parse_universe("universe x { schema { k: [x] } candidates { "
                                   "a { rrtype: AAAA ttl: 60 rdata: [\"::1\"] } } }"),
                    Error);  // only the full 8-group form
  }
}

TEST_CASE("profile text round-trips and distinguishes omitted from empty") {
  const std::string full = R"(
profile narrow {
  attributes: [region]
  selections: [fixed, weighted]
  weight_quantum: 1/4
  max_regions: 3
  forget_distribution: true
}
)";
  const RealizationProfile p = parse_profile(full);
  CHECK(p.name == "narrow");
  REQUIRE(p.allowed_attributes.has_value());
  CHECK(p.allowed_attributes->count("region") == 1);
  REQUIRE(p.allowed_selections.has_value());
  CHECK(p.allowed_selections->size() == 2);
  CHECK(*p.weight_quantum == Rational(1, 4));
  CHECK(*p.max_regions == 3);
  CHECK(p.forget_distribution);
  const std::string printed = print_profile(p);
  CHECK(print_profile(parse_profile(printed)) == printed);

  const RealizationProfile empty_attrs = parse_profile("profile x { attributes: [] }");
  REQUIRE(empty_attrs.allowed_attributes.has_value());
  CHECK(empty_attrs.allowed_attributes->empty());

  const RealizationProfile unrestricted = parse_profile("profile x {}");
  CHECK_FALSE(unrestricted.allowed_attributes.has_value());
  CHECK_FALSE(unrestricted.weight_quantum.has_value());

  const RealizationProfile none_fields =
      parse_profile("profile x { weight_quantum: none max_regions: none }");
  CHECK_FALSE(none_fields.weight_quantum.has_value());
  CHECK_FALSE(none_fields.max_regions.has_value());

  CHECK_THROWS_AS(parse_profile("profile x { weight_quantum: 2/3 }"), Error);  // must divide 1
  CHECK_THROWS_AS(parse_profile("profile x { selections: [sorcery] }"), Error);
}

TEST_CASE("normal form text: bit-exact round-trip") {
  const auto u = fixtures::u0();
  for (const Behavior& f : {fixtures::p_geo(u), fixtures::p_w(u), zero(u),
                            affinity(u, "qtype"), fixed(u, {"a1", "a2"})}) {
    const NormalForm nf = normalize(f);
    const std::string text = print_normal_form(nf);
    const NormalForm back = parse_normal_form(text, u);
    CHECK(back.same_partition_and_outcomes(nf));
    CHECK(print_normal_form(back) == text);
    CHECK(equiv(reconstruct(back), f).equal);
  }

  SUBCASE("outcomes are normalized on parse") {
    const NormalForm nf =
        parse_normal_form("when true serve weighted {{a1}: 2, {a2}: 6}\n", u);
    CHECK(nf.regions().front().outcome.get(1) == Rational(1, 4));
    CHECK(nf.regions().front().outcome.get(2) == Rational(3, 4));
  }

  SUBCASE("clauses must partition the context space") {
    CHECK_THROWS_AS(parse_normal_form("when region = NA serve fixed {a1}\n", u),
                    Error);  // EU uncovered
    CHECK_THROWS_AS(
        parse_normal_form("when true serve empty\nwhen region = NA serve fixed {a1}\n", u),
        Error);  // NA double-covered
    CHECK_THROWS_AS(parse_normal_form("", u), Error);
  }
}

TEST_CASE("context text parses against the universe") {
  const auto u = fixtures::u0();
  CHECK(parse_context("region=EU qtype=A", u).index() == 2);
  CHECK(parse_context("qtype = AAAA, region = NA", u).index() == 1);  // order-free
  CHECK_THROWS_AS(parse_context("region=EU", u), Error);
  CHECK_THROWS_AS(parse_context("region=EU qtype=A region=NA", u), Error);
  CHECK_THROWS_AS(parse_context("region=XX qtype=A", u), Error);
}

TEST_CASE("policy documents carry an optional universe reference") {
  const PolicyDocument with = parse_policy("universe \"u0.universe\"\none");
  CHECK(with.universe_ref == "u0.universe");
  CHECK(print_policy(with) == "universe \"u0.universe\"\none\n");
  const PolicyDocument without = parse_policy("one");
  CHECK(without.universe_ref.empty());
}
