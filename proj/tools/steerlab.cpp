// steerlab — command-line surface over the response-selection algebra.
//
// Exit codes: 0 affirmative/success, 1 negative verdict (witness printed),
// 2 input error. All output is deterministic for identical inputs and seed.

#include "steerlab/algebra.hpp"
#include "steerlab/error.hpp"
#include "steerlab/normalform.hpp"
#include "steerlab/random_gen.hpp"
#include "steerlab/realization.hpp"
#include "steerlab/text.hpp"
#include "steerlab/wire.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using steerlab::Behavior;
using steerlab::Error;
using steerlab::ErrorKind;
using steerlab::Universe;
using Json = nlohmann::ordered_json;

struct CommonArgs {
  bool json = false;
  bool extended = false;
  std::string seed_text;         // empty -> STEERLAB_SEED -> 0
  std::size_t trials = 1000;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_trials = false) {
  sub->add_flag("--json", args.json, "emit a machine-readable JSON report");
  sub->add_flag("--extended-algebra", args.extended,
                "allow product(e1, e2) in policy syntax (general ⊗)");
  sub->add_option("--seed", args.seed_text, "RNG seed (default: $STEERLAB_SEED, else 0)");
  if (with_trials) {
    sub->add_option("--trials", args.trials, "number of randomized trials")->capture_default_str();
  }
}

std::uint64_t resolve_seed(const CommonArgs& args) {
  std::string text = args.seed_text;
  if (text.empty()) {
    if (const char* env = std::getenv("STEERLAB_SEED")) text = env;
  }
  if (text.empty()) return 0;
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "seed must be a nonnegative integer, got '" + text + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read file '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string directory_of(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

/// The universe argument wins; otherwise the first policy document carrying a
/// `universe "<path>"` header (resolved relative to that policy file) is used.
std::shared_ptr<const Universe> resolve_universe(
    const std::string& universe_path,
    const std::vector<std::pair<std::string, const steerlab::PolicyDocument*>>& docs) {
  if (!universe_path.empty()) return steerlab::parse_universe(read_file(universe_path));
  for (const auto& [policy_path, doc] : docs) {
    if (!doc->universe_ref.empty()) {
      return steerlab::parse_universe(read_file(directory_of(policy_path) + doc->universe_ref));
    }
  }
  throw Error(ErrorKind::InvalidInput,
              "no universe: pass one as an argument or add a `universe \"<path>\"` header");
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += ids[i];
  }
  return out + "}";
}

std::string indent_block(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) out << "  " << line << '\n';
  return out.str();
}

void emit_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

// --- subcommands -------------------------------------------------------------

int cmd_normalize(const std::string& policy_path, const std::string& universe_path,
                  const CommonArgs& args) {
  const auto doc = steerlab::parse_policy(read_file(policy_path), args.extended);
  const auto u = resolve_universe(universe_path, {{policy_path, &doc}});
  const Behavior f = steerlab::elaborate(doc, u);
  const steerlab::NormalForm nf = steerlab::normalize(f);
  if (args.json) {
    Json regions = Json::array();
    for (const auto& r : nf.regions()) {
      Json contexts = Json::array();
      for (std::size_t c : r.contexts) contexts.push_back(u->context_at(c).to_string());
      regions.push_back({{"predicate", r.predicate.to_string()},
                         {"outcome", steerlab::row_to_string(*u, r.outcome)},
                         {"contexts", contexts}});
    }
    emit_json({{"schema", 1},
               {"command", "normalize"},
               {"region_count", nf.regions().size()},
               {"regions", regions},
               {"normal_form", steerlab::print_normal_form(nf)}});
  } else {
    std::cout << steerlab::print_normal_form(nf);
  }
  return 0;
}

int cmd_equiv(const std::string& left_path, const std::string& right_path,
              const std::string& universe_path, const CommonArgs& args) {
  const auto left_doc = steerlab::parse_policy(read_file(left_path), args.extended);
  const auto right_doc = steerlab::parse_policy(read_file(right_path), args.extended);
  const auto u =
      resolve_universe(universe_path, {{left_path, &left_doc}, {right_path, &right_doc}});
  const Behavior f = steerlab::elaborate(left_doc, u);
  const Behavior g = steerlab::elaborate(right_doc, u);
  const steerlab::EquivResult r = steerlab::equiv(f, g);
  if (args.json) {
    Json j{{"schema", 1}, {"command", "equiv"}, {"equal", r.equal}};
    if (!r.equal) {
      const auto& w = *r.witness;
      j["witness"] = w.to_string();
      j["left"] = steerlab::row_to_string(*u, steerlab::observable(f).row(w.index()));
      j["right"] = steerlab::row_to_string(*u, steerlab::observable(g).row(w.index()));
    }
    emit_json(j);
  } else if (r.equal) {
    std::cout << "equivalent\n";
  } else {
    const auto& w = *r.witness;
    std::cout << "not equivalent\n"
              << "witness: " << w.to_string() << '\n'
              << "left:  " << steerlab::row_to_string(*u, steerlab::observable(f).row(w.index()))
              << '\n'
              << "right: " << steerlab::row_to_string(*u, steerlab::observable(g).row(w.index()))
              << '\n';
  }
  return r.equal ? 0 : 1;
}

int cmd_check_laws(const std::string& universe_path, const CommonArgs& args) {
  const auto u = steerlab::parse_universe(read_file(universe_path));
  std::mt19937_64 rng(resolve_seed(args));

  struct Family {
    const char* name;
    std::function<bool(const Behavior&, const Behavior&, const Behavior&)> holds;
  };
  using steerlab::add;
  using steerlab::mul;
  const Behavior zero_b = steerlab::zero(u);
  const Behavior one_b = steerlab::one(u);
  const std::vector<Family> families = {
      {"add-assoc",
       [](const Behavior& f, const Behavior& g, const Behavior& h) {
         return add(add(f, g), h).raw_equal(add(f, add(g, h)));
       }},
      {"add-comm",
       [](const Behavior& f, const Behavior& g, const Behavior&) {
         return add(f, g).raw_equal(add(g, f));
       }},
      {"add-identity",
       [&](const Behavior& f, const Behavior&, const Behavior&) {
         return add(f, zero_b).raw_equal(f) && add(zero_b, f).raw_equal(f);
       }},
      {"mul-assoc",
       [](const Behavior& f, const Behavior& g, const Behavior& h) {
         return mul(mul(f, g), h).raw_equal(mul(f, mul(g, h)));
       }},
      {"mul-identity",
       [&](const Behavior& f, const Behavior&, const Behavior&) {
         return mul(f, one_b).raw_equal(f) && mul(one_b, f).raw_equal(f);
       }},
      {"distributivity",
       [](const Behavior& f, const Behavior& g, const Behavior& h) {
         return mul(f, add(g, h)).raw_equal(add(mul(f, g), mul(f, h))) &&
                mul(add(f, g), h).raw_equal(add(mul(f, h), mul(g, h)));
       }},
      {"annihilation",
       [&](const Behavior& f, const Behavior&, const Behavior&) {
         return mul(f, zero_b).raw_equal(zero_b) && mul(zero_b, f).raw_equal(zero_b);
       }},
  };

  Json report = Json::array();
  for (const Family& family : families) {
    std::mt19937_64 family_rng(rng());  // one stream per family, all seed-derived
    for (std::size_t t = 0; t < args.trials; ++t) {
      const Behavior f = steerlab::random_behavior(family_rng, u);
      const Behavior g = steerlab::random_behavior(family_rng, u);
      const Behavior h = steerlab::random_behavior(family_rng, u);
      if (!family.holds(f, g, h)) {
        if (args.json) {
          emit_json({{"schema", 1},
                     {"command", "check-laws"},
                     {"pass", false},
                     {"law", family.name},
                     {"trial", t}});
        } else {
          std::cout << family.name << ": FAIL at trial " << t << '\n';
        }
        return 1;
      }
    }
    if (args.json) {
      report.push_back({{"law", family.name}, {"pass", true}, {"trials", args.trials}});
    } else {
      std::cout << family.name << ": pass (" << args.trials << " trials)\n";
    }
  }
  if (args.json) {
    emit_json({{"schema", 1}, {"command", "check-laws"}, {"pass", true}, {"families", report}});
  } else {
    std::cout << "all 7 law families hold\n";
  }
  return 0;
}

int cmd_admits(const std::string& profile_path, const std::string& policy_path,
               const std::string& universe_path, const CommonArgs& args) {
  const auto R = steerlab::parse_profile(read_file(profile_path));
  const auto doc = steerlab::parse_policy(read_file(policy_path), args.extended);
  const auto u = resolve_universe(universe_path, {{policy_path, &doc}});
  R.validate_against(*u);
  const steerlab::AdmitResult r = steerlab::admits(R, steerlab::elaborate(doc, u));
  if (args.json) {
    Json j{{"schema", 1}, {"command", "admits"}, {"admitted", r.admitted}};
    if (!r.admitted) j["diagnosis"] = r.diagnosis;
    emit_json(j);
  } else if (r.admitted) {
    std::cout << "admitted\n";
  } else {
    std::cout << "not admitted\ndiagnosis: " << r.diagnosis << '\n';
  }
  return r.admitted ? 0 : 1;
}

int cmd_represent(const std::string& profile_path, const std::string& policy_path,
                  const std::string& universe_path, const CommonArgs& args) {
  const auto R = steerlab::parse_profile(read_file(profile_path));
  const auto doc = steerlab::parse_policy(read_file(policy_path), args.extended);
  const auto u = resolve_universe(universe_path, {{policy_path, &doc}});
  R.validate_against(*u);
  const Behavior f = steerlab::elaborate(doc, u);

  const steerlab::AdmitResult a = steerlab::admits(R, f);
  std::string diagnosis = a.diagnosis;
  std::string witness, original, collapsed;
  bool representable = a.admitted;
  if (representable) {
    const Behavior c = steerlab::collapse(R, f);
    const steerlab::EquivResult eq = steerlab::equiv(c, f);
    if (!eq.equal) {
      representable = false;
      diagnosis = "collapse alters the behavior";
      witness = eq.witness->to_string();
      const std::size_t i = eq.witness->index();
      original = steerlab::row_to_string(*u, steerlab::observable(f).row(i));
      collapsed = steerlab::row_to_string(*u, steerlab::observable(c).row(i));
    }
  }
  if (args.json) {
    Json j{{"schema", 1}, {"command", "represent"}, {"representable", representable}};
    if (!representable) {
      j["diagnosis"] = diagnosis;
      if (!witness.empty()) {
        j["witness"] = witness;
        j["original"] = original;
        j["collapsed"] = collapsed;
      }
    }
    emit_json(j);
  } else if (representable) {
    std::cout << "exactly representable\n";
  } else {
    std::cout << "not exactly representable\ndiagnosis: " << diagnosis << '\n';
    if (!witness.empty()) {
      std::cout << "witness: " << witness << '\n'
                << "original:  " << original << '\n'
                << "collapsed: " << collapsed << '\n';
    }
  }
  return representable ? 0 : 1;
}

int cmd_approx(const std::string& profile_path, const std::string& policy_path,
               const std::string& universe_path, const CommonArgs& args) {
  const auto R = steerlab::parse_profile(read_file(profile_path));
  const auto doc = steerlab::parse_policy(read_file(policy_path), args.extended);
  const auto u = resolve_universe(universe_path, {{policy_path, &doc}});
  R.validate_against(*u);
  const Behavior f = steerlab::elaborate(doc, u);
  const auto list = steerlab::approximations(R, f);
  const std::size_t total = steerlab::distinctions(f).size();

  if (args.json) {
    Json items = Json::array();
    for (const auto& a : list) {
      items.push_back({{"preserved", a.preserved_distinctions.size()},
                       {"total_distinctions", total},
                       {"minimal", a.minimal},
                       {"normal_form", steerlab::print_normal_form(steerlab::normalize(a.behavior))}});
    }
    emit_json({{"schema", 1},
               {"command", "approx"},
               {"count", list.size()},
               {"approximations", items}});
  } else if (list.empty()) {
    std::cout << "no admissible approximation exists\n";
  } else {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& a = list[i];
      std::cout << "approximation " << (i + 1) << " of " << list.size() << ": preserves "
                << a.preserved_distinctions.size() << "/" << total << " distinctions"
                << (a.minimal ? ", minimal" : "") << '\n'
                << indent_block(steerlab::print_normal_form(steerlab::normalize(a.behavior)));
    }
  }
  return list.empty() ? 1 : 0;
}

int cmd_lower(const std::string& profile_path, const std::string& policy_path,
              const std::string& universe_path, const CommonArgs& args) {
  const auto R = steerlab::parse_profile(read_file(profile_path));
  const auto doc = steerlab::parse_policy(read_file(policy_path), args.extended);
  const auto u = resolve_universe(universe_path, {{policy_path, &doc}});
  R.validate_against(*u);
  const Behavior f = steerlab::elaborate(doc, u);
  const steerlab::LowerResult r = steerlab::lowerable(R, f, args.trials, resolve_seed(args));
  const bool yes = r.verdict == steerlab::Verdict::Yes;

  if (args.json) {
    Json j{{"schema", 1},
           {"command", "lower"},
           {"lowerable", yes},
           {"scope", r.exhaustive ? "exhaustive" : "sampled"},
           {"subalgebra_size", r.subalgebra_size},
           {"trials_run", r.trials_run},
           {"reason", r.reason}};
    if (r.counterexample) {
      j["counterexample"] = {
          {"law", r.counterexample->law},
          {"witness", r.counterexample->witness.to_string()},
          {"lhs_operand",
           steerlab::print_normal_form(steerlab::normalize(r.counterexample->lhs_operand))},
          {"rhs_operand",
           steerlab::print_normal_form(steerlab::normalize(r.counterexample->rhs_operand))}};
    }
    emit_json(j);
  } else {
    std::cout << "lowerable: " << (yes ? "yes" : "no") << '\n'
              << "scope: " << (r.exhaustive ? "exhaustive" : "sampled") << '\n'
              << "subalgebra size: " << r.subalgebra_size << '\n'
              << "trials: " << r.trials_run << '\n'
              << "reason: " << r.reason << '\n';
    if (r.counterexample) {
      std::cout << "law: " << r.counterexample->law << '\n'
                << "witness: " << r.counterexample->witness.to_string() << '\n'
                << "lhs operand:\n"
                << indent_block(
                       steerlab::print_normal_form(steerlab::normalize(r.counterexample->lhs_operand)))
                << "rhs operand:\n"
                << indent_block(
                       steerlab::print_normal_form(steerlab::normalize(r.counterexample->rhs_operand)));
    }
  }
  return yes ? 0 : 1;
}

steerlab::RrType parse_qtype(const std::string& text) {
  if (text == "A") return steerlab::RrType::A;
  if (text == "AAAA") return steerlab::RrType::AAAA;
  throw Error(ErrorKind::InvalidInput, "qtype must be A or AAAA, got '" + text + "'");
}

int cmd_serve(const std::string& policy_path, const std::string& universe_path,
              const std::string& context_text, const std::string& mode_text,
              const std::string& qname, const std::string& qtype_text, bool hex,
              const CommonArgs& args) {
  const auto doc = steerlab::parse_policy(read_file(policy_path), args.extended);
  const auto u = resolve_universe(universe_path, {{policy_path, &doc}});
  const Behavior f = steerlab::elaborate(doc, u);
  const steerlab::QueryContext c = steerlab::parse_context(context_text, u);

  steerlab::ServeMode mode;
  if (mode_text == "deterministic") {
    mode = steerlab::ServeMode::Deterministic;
  } else if (mode_text == "sample") {
    mode = steerlab::ServeMode::Sample;
  } else {
    throw Error(ErrorKind::InvalidInput, "mode must be deterministic or sample");
  }
  steerlab::EncodeOptions opts;
  opts.qname = qname;
  opts.qtype = parse_qtype(qtype_text);
  const steerlab::ServedResponse r = steerlab::serve(f, c, mode, resolve_seed(args), opts);

  if (args.json) {
    Json rrsets = Json::array();
    for (const auto& cand : r.rrsets) rrsets.push_back(cand.id());
    emit_json({{"schema", 1},
               {"command", "serve"},
               {"context", c.to_string()},
               {"subset", join_ids(r.answer_subset)},
               {"rrsets", rrsets},
               {"ttl", r.ttl},
               {"truncated", r.truncated},
               {"empty", r.empty},
               {"steps_used", r.steps_used},
               {"step_bound", r.step_bound},
               {"bytes", r.wire.size()},
               {"wire", steerlab::to_hex(r.wire)}});
  } else {
    std::cout << "subset: " << join_ids(r.answer_subset) << '\n';
    std::cout << "rrsets:";
    for (const auto& cand : r.rrsets) std::cout << ' ' << cand.id();
    std::cout << '\n'
              << "ttl: " << r.ttl << '\n'
              << "truncated: " << (r.truncated ? "true" : "false") << '\n'
              << "empty: " << (r.empty ? "true" : "false") << '\n'
              << "steps: " << r.steps_used << "/" << r.step_bound << '\n'
              << "bytes: " << r.wire.size() << '\n';
    if (hex) std::cout << "wire: " << steerlab::to_hex(r.wire) << '\n';
  }
  return 0;
}

int cmd_encode(const std::string& universe_path, const std::string& ids_text,
               const std::string& qname, const std::string& qtype_text, const CommonArgs& args) {
  const auto u = steerlab::parse_universe(read_file(universe_path));
  std::vector<std::string> ids;
  std::istringstream in(ids_text);
  std::string id;
  while (std::getline(in, id, ',')) {
    if (!id.empty()) ids.push_back(id);
  }
  steerlab::EncodeOptions opts;
  opts.qname = qname;
  opts.qtype = parse_qtype(qtype_text);
  const steerlab::EncodeResult r = steerlab::encode(*u, ids, opts);

  if (args.json) {
    Json encoded = Json::array();
    for (const auto& e : r.encoded_ids) encoded.push_back(e);
    emit_json({{"schema", 1},
               {"command", "encode"},
               {"bytes", r.wire.size()},
               {"truncated", r.truncated},
               {"encoded", encoded},
               {"wire", steerlab::to_hex(r.wire)}});
  } else {
    std::cout << "bytes: " << r.wire.size() << '\n'
              << "truncated: " << (r.truncated ? "true" : "false") << '\n';
    std::cout << "encoded:";
    for (const auto& e : r.encoded_ids) std::cout << ' ' << e;
    std::cout << '\n' << "wire: " << steerlab::to_hex(r.wire) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steerlab — bounded algebra of authoritative DNS response selection"};
  app.require_subcommand(1);

  CommonArgs args;

  auto* norm = app.add_subcommand("normalize", "print a policy's conditional-selection normal form");
  std::string norm_policy, norm_universe;
  norm->add_option("policy", norm_policy, ".policy file")->required();
  norm->add_option("universe", norm_universe, ".universe file");
  add_common(norm, args);

  auto* eq = app.add_subcommand("equiv", "decide observational equivalence of two policies");
  std::string eq_left, eq_right, eq_universe;
  eq->add_option("left", eq_left, "first .policy file")->required();
  eq->add_option("right", eq_right, "second .policy file")->required();
  eq->add_option("universe", eq_universe, ".universe file");
  add_common(eq, args);

  auto* laws = app.add_subcommand("check-laws", "property-test the semiring laws over a universe");
  std::string laws_universe;
  laws->add_option("universe", laws_universe, ".universe file")->required();
  add_common(laws, args, /*with_trials=*/true);

  auto* adm = app.add_subcommand("admits", "check substructure membership under a profile");
  std::string adm_profile, adm_policy, adm_universe;
  adm->add_option("profile", adm_profile, ".profile file")->required();
  adm->add_option("policy", adm_policy, ".policy file")->required();
  adm->add_option("universe", adm_universe, ".universe file");
  add_common(adm, args);

  auto* rep = app.add_subcommand("represent", "check exact representability under a profile");
  std::string rep_profile, rep_policy, rep_universe;
  rep->add_option("profile", rep_profile, ".profile file")->required();
  rep->add_option("policy", rep_policy, ".policy file")->required();
  rep->add_option("universe", rep_universe, ".universe file");
  add_common(rep, args);

  auto* apx = app.add_subcommand("approx", "enumerate admitted approximations, best-preserving first");
  std::string apx_profile, apx_policy, apx_universe;
  apx->add_option("profile", apx_profile, ".profile file")->required();
  apx->add_option("policy", apx_policy, ".policy file")->required();
  apx->add_option("universe", apx_universe, ".universe file");
  add_common(apx, args);

  auto* low = app.add_subcommand("lower", "property-test lowerability under a profile");
  std::string low_profile, low_policy, low_universe;
  low->add_option("profile", low_profile, ".profile file")->required();
  low->add_option("policy", low_policy, ".policy file")->required();
  low->add_option("universe", low_universe, ".universe file");
  add_common(low, args, /*with_trials=*/true);

  auto* srv = app.add_subcommand("serve", "evaluate a policy at one context and build the wire response");
  std::string srv_policy, srv_universe, srv_context, srv_mode = "deterministic";
  std::string srv_qname = "svc.example.com", srv_qtype = "A";
  bool srv_hex = false;
  srv->add_option("policy", srv_policy, ".policy file")->required();
  srv->add_option("universe", srv_universe, ".universe file");
  srv->add_option("--context", srv_context, "context assignment, e.g. \"region=NA qtype=A\"")
      ->required();
  srv->add_option("--mode", srv_mode, "deterministic | sample")->capture_default_str();
  srv->add_option("--qname", srv_qname, "question name")->capture_default_str();
  srv->add_option("--qtype", srv_qtype, "question type: A | AAAA")->capture_default_str();
  srv->add_flag("--hex", srv_hex, "also print the wire bytes as hex");
  add_common(srv, args);

  auto* enc = app.add_subcommand("encode", "wire-encode an answer set for a universe");
  std::string enc_universe, enc_ids, enc_qname = "svc.example.com", enc_qtype = "A";
  enc->add_option("universe", enc_universe, ".universe file")->required();
  enc->add_option("--ids", enc_ids, "comma-separated candidate ids")->required();
  enc->add_option("--qname", enc_qname, "question name")->capture_default_str();
  enc->add_option("--qtype", enc_qtype, "question type: A | AAAA")->capture_default_str();
  add_common(enc, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (norm->parsed()) return cmd_normalize(norm_policy, norm_universe, args);
    if (eq->parsed()) return cmd_equiv(eq_left, eq_right, eq_universe, args);
    if (laws->parsed()) return cmd_check_laws(laws_universe, args);
    if (adm->parsed()) return cmd_admits(adm_profile, adm_policy, adm_universe, args);
    if (rep->parsed()) return cmd_represent(rep_profile, rep_policy, rep_universe, args);
    if (apx->parsed()) return cmd_approx(apx_profile, apx_policy, apx_universe, args);
    if (low->parsed()) return cmd_lower(low_profile, low_policy, low_universe, args);
    if (srv->parsed()) {
      return cmd_serve(srv_policy, srv_universe, srv_context, srv_mode, srv_qname, srv_qtype,
                       srv_hex, args);
    }
    if (enc->parsed()) return cmd_encode(enc_universe, enc_ids, enc_qname, enc_qtype, args);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1)
}
