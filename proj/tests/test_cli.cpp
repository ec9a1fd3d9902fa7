#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

/// Run the built CLI with the given arguments, capturing stdout and the exit
/// code. `env` is prepended verbatim (e.g. "STEERLAB_SEED=5").
RunResult run(const std::string& args, const std::string& env = "") {
  std::string cmd;
  if (!env.empty()) cmd += env + " ";
  cmd += std::string(STEERLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

/// One shared fixture directory with the running example files.
const std::string& fixture_dir() {
  static const std::string dir = [] {
    char tmpl[] = "/tmp/steerlab_cli_XXXXXX";
    const char* made = mkdtemp(tmpl);
    REQUIRE(made != nullptr);
    const std::string d = std::string(made) + "/";
    write_file(d + "u0.universe", R"(universe u0 {
  schema {
    region: [NA, EU]
    qtype: [A, AAAA]
  }
  candidates {
    a1 { rrtype: A  ttl: 60  rdata: ["192.0.2.1"] }
    a2 { rrtype: A  ttl: 60  rdata: ["192.0.2.2"] }
  }
}
)");
    write_file(d + "p_geo.policy",
               "universe \"u0.universe\"\n"
               "merge(when region = NA apply fixed {a1}, when region = EU apply fixed {a2})\n");
    write_file(d + "p_w.policy", "universe \"u0.universe\"\nweighted {{a1}: 1/4, {a2}: 3/4}\n");
    write_file(d + "p_w2.policy", "universe \"u0.universe\"\nweighted {{a1}: 1/3, {a2}: 2/3}\n");
    write_file(d + "broken.policy", "merge(one,\n  fixed {a1)\n");
    write_file(d + "single.profile", "profile single_answer {\n  selections: [fixed]\n}\n");
    write_file(d + "quantum.profile", "profile coarse { weight_quantum: 1/2 }\n");
    write_file(d + "forget.profile", "profile support_only { forget_distribution: true }\n");
    write_file(d + "nothing.profile", "profile nothing { selections: [] }\n");
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return fixture_dir() + name; }

}  // namespace

TEST_CASE("normalize prints the normal form and exits 0") {
  const RunResult r = run("normalize " + path("p_geo.policy"));
  CHECK(r.code == 0);
  CHECK(r.out ==
        "when region = NA serve fixed {a1}\n"
        "when region = EU serve fixed {a2}\n");
}

TEST_CASE("equiv: reflexive 0, distinct 1 with witness") {
  const RunResult same = run("equiv " + path("p_geo.policy") + " " + path("p_geo.policy"));
  CHECK(same.code == 0);
  CHECK(same.out == "equivalent\n");

  const RunResult diff = run("equiv " + path("p_geo.policy") + " " + path("p_w.policy"));
  CHECK(diff.code == 1);
  CHECK(diff.out.find("not equivalent") != std::string::npos);
  CHECK(diff.out.find("witness: region=NA qtype=A") != std::string::npos);

  SUBCASE("json report") {
    const RunResult j =
        run("equiv " + path("p_geo.policy") + " " + path("p_w.policy") + " --json");
    CHECK(j.code == 1);
    const auto parsed = nlohmann::json::parse(j.out);
    CHECK(parsed.at("schema") == 1);
    CHECK(parsed.at("equal") == false);
    CHECK(parsed.at("witness") == "region=NA qtype=A");
  }
}

TEST_CASE("check-laws reports seven passing families deterministically") {
  const std::string args = "check-laws " + path("u0.universe") + " --trials 5 --seed 42";
  const RunResult a = run(args);
  CHECK(a.code == 0);
  CHECK(a.out.find("all 7 law families hold") != std::string::npos);
  for (const char* family : {"add-assoc", "add-comm", "add-identity", "mul-assoc",
                             "mul-identity", "distributivity", "annihilation"}) {
    CHECK(a.out.find(std::string(family) + ": pass") != std::string::npos);
  }
  const RunResult b = run(args);
  CHECK(a.out == b.out);  // byte-identical for identical inputs and seed

  const RunResult j = run(args + " --json");
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed.at("schema") == 1);
  CHECK(parsed.at("pass") == true);
  CHECK(parsed.at("families").size() == 7);
}

TEST_CASE("admits and represent verdicts") {
  CHECK(run("admits " + path("single.profile") + " " + path("p_geo.policy")).code == 0);

  const RunResult no = run("admits " + path("single.profile") + " " + path("p_w.policy"));
  CHECK(no.code == 1);
  CHECK(no.out.find("weighted outcome not expressible") != std::string::npos);

  const RunResult rep = run("represent " + path("quantum.profile") + " " + path("p_w.policy"));
  CHECK(rep.code == 1);
  CHECK(rep.out.find("off the quantum grid") != std::string::npos);

  const RunResult repyes =
      run("represent " + path("single.profile") + " " + path("p_geo.policy"));
  CHECK(repyes.code == 0);
  CHECK(repyes.out == "exactly representable\n");
}

TEST_CASE("approx lists candidates or exits 1 when none exist") {
  const RunResult two = run("approx " + path("single.profile") + " " + path("p_w.policy"));
  CHECK(two.code == 0);
  CHECK(two.out.find("approximation 1 of 2") != std::string::npos);
  CHECK(two.out.find("approximation 2 of 2") != std::string::npos);
  CHECK(two.out.find("minimal") != std::string::npos);

  const RunResult none = run("approx " + path("nothing.profile") + " " + path("p_w.policy"));
  CHECK(none.code == 1);
  CHECK(none.out == "no admissible approximation exists\n");

  const RunResult j = run("approx " + path("single.profile") + " " + path("p_w.policy") + " --json");
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed.at("schema") == 1);
  CHECK(parsed.at("count") == 2);
  CHECK(parsed.at("approximations").at(0).at("minimal") == true);
}

TEST_CASE("lower verdicts with witnesses") {
  const RunResult yes = run("lower " + path("forget.profile") + " " + path("p_geo.policy") +
                            " --trials 600 --seed 7");
  CHECK(yes.code == 0);
  CHECK(yes.out.find("lowerable: yes") != std::string::npos);
  CHECK(yes.out.find("scope: exhaustive") != std::string::npos);

  const RunResult no = run("lower " + path("quantum.profile") + " " + path("p_w.policy") +
                           " --trials 600 --seed 7");
  CHECK(no.code == 1);
  CHECK(no.out.find("lowerable: no") != std::string::npos);
  CHECK(no.out.find("witness: ") != std::string::npos);
  CHECK(no.out.find("lhs operand:") != std::string::npos);
}

TEST_CASE("serve is deterministic and honors STEERLAB_SEED") {
  const std::string det =
      "serve " + path("p_w.policy") + " --context \"region=NA qtype=A\"";
  const RunResult r = run(det);
  CHECK(r.code == 0);
  CHECK(r.out.find("subset: {a2}") != std::string::npos);
  CHECK(r.out.find("empty: false") != std::string::npos);
  CHECK(run(det).out == r.out);

  const std::string sample =
      "serve " + path("p_w.policy") + " --context \"region=NA qtype=A\" --mode sample";
  const RunResult flag = run(sample + " --seed 5");
  const RunResult env = run(sample, "STEERLAB_SEED=5");
  CHECK(flag.code == 0);
  CHECK(flag.out == env.out);  // env supplies the default seed

  const RunResult override_wins = run(sample + " --seed 7", "STEERLAB_SEED=5");
  CHECK(override_wins.out == run(sample + " --seed 7").out);

  SUBCASE("json carries the wire bytes") {
    const RunResult j = run(det + " --json");
    const auto parsed = nlohmann::json::parse(j.out);
    CHECK(parsed.at("schema") == 1);
    CHECK(parsed.at("subset") == "{a2}");
    CHECK(parsed.at("bytes") == 64);
    CHECK(parsed.at("wire").get<std::string>().substr(0, 8) == "00008400");
  }
}

TEST_CASE("encode emits golden wire bytes") {
  const RunResult r = run("encode " + path("u0.universe") + " --ids a1,a2");
  CHECK(r.code == 0);
  CHECK(r.out.find("bytes: 95") != std::string::npos);
  CHECK(r.out.find("truncated: false") != std::string::npos);
  CHECK(r.out.find("wire: 000084000001000200000000") != std::string::npos);
}

TEST_CASE("input problems exit 2") {
  CHECK(run("normalize " + path("missing.policy")).code == 2);
  CHECK(run("normalize " + path("broken.policy") + " " + path("u0.universe")).code == 2);
  CHECK(run("normalize " + path("broken.policy")).code == 2);
  // no universe argument and no universe header
  write_file(path("orphan.policy"), "one\n");
  CHECK(run("normalize " + path("orphan.policy")).code == 2);
  CHECK(run("serve " + path("p_w.policy") + " --context \"region=XX qtype=A\"").code == 2);
  CHECK(run("serve " + path("p_w.policy") + " --context \"region=NA qtype=A\" --mode warp").code ==
        2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("equiv " + path("p_geo.policy")).code == 2);  // missing operand
  // product is refused without the flag, accepted with it
  write_file(path("prod.policy"), "universe \"u0.universe\"\nproduct(one, fixed {a1})\n");
  CHECK(run("normalize " + path("prod.policy")).code == 2);
  CHECK(run("normalize " + path("prod.policy") + " --extended-algebra").code == 0);
}

TEST_CASE("help exits 0") {
  CHECK(run("--help").code == 0);
  CHECK(run("serve --help").code == 0);
}
