#pragma once

// Command-line front end: decide, verify, axioms, construct.
// Exit codes: 0 yes/pass/valid, 1 no/fail/invalid, 2 inconclusive,
// 64 usage, 65 bad input data, 70 a construction failed its own check.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wtype/instances.hpp"
#include "wtype/io.hpp"
#include "wtype/pom.hpp"
#include "wtype/semigroup.hpp"

namespace wtype::cli {

inline constexpr int kExitYes = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitInternal = 70;

struct Options {
  std::string system;
  std::string a, b, c, a_prime, b_prime, c_tilde;
  std::string cert;
  std::string construction;
  std::string suite = "W1-W6";
  std::string out;
  int depth = 3;
  int radius = 4;
  std::uint64_t nodes = 1'000'000;
  double timeout = 30.0;
  std::uint64_t seed = 1;
  std::size_t samples = 50;

  Budget budget() const {
    Budget b;
    b.depth = depth;
    b.radius = radius;
    b.nodes = nodes;
    b.timeout_seconds = timeout;
    return b;
  }
};

namespace detail {

inline void emit(const nlohmann::json& doc, const Options& o, std::ostream& out) {
  const auto text = doc.dump(2);
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw Error(ErrorCode::schema, "cannot write " + o.out);
    f << text << "\n";
  }
  out << text << "\n";
}

inline TupleElement tuple_arg(const std::string& arg, const char* flag, const DynamicalSystem& sys) {
  if (arg.empty()) throw CLI::ValidationError(flag, "required for this command");
  return io::tuple_from_json(io::read_literal(arg), sys.space());
}

inline int decide_cmd(const Options& o, std::ostream& out) {
  auto sys = io::system_from_json(io::read_file(o.system));
  auto a = tuple_arg(o.a, "--a", *sys);
  auto b = tuple_arg(o.b, "--b", *sys);
  auto v = decide(*sys, a, b, o.budget());
  emit(io::verdict_to_json(v, a, b), o, out);
  return v.yes() ? kExitYes : v.no() ? kExitNo : kExitInconclusive;
}

inline int verify_cmd(const Options& o, std::ostream& out) {
  if (o.cert.empty()) throw CLI::ValidationError("--cert", "required for verify");
  auto sys = io::system_from_json(io::read_file(o.system));
  const auto doc = io::read_literal(o.cert[0] == '@' ? o.cert : "@" + o.cert);
  auto c = io::certificate_from_json(doc, *sys);
  nlohmann::json res{{"format_version", io::kFormatVersion}};
  bool ok = false;
  try {
    ok = verify_certificate(*sys, c);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::index) throw;
    res["error"] = error_code_name(e.code());
    res["message"] = e.what();
  }
  res["valid"] = ok;
  emit(res, o, out);
  return ok ? kExitYes : kExitNo;
}

inline int axioms_cmd(const Options& o, std::ostream& out) {
  auto sys_doc = io::read_file(o.system);
  auto sys = io::system_from_json(sys_doc);
  auto inst = instances::semigroup_instance(sys);
  pom::SampleSpec spec;
  spec.seed = o.seed;
  spec.samples = o.samples;
  const auto axioms = pom::parse_suite(o.suite);
  auto reports = pom::check_suite(axioms, inst.view, inst.prec, inst.constructors, spec);
  bool fail = false, inconclusive = false;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : reports) {
    fail = fail || r.status() == pom::Status::fail;
    inconclusive = inconclusive || r.status() == pom::Status::inconclusive;
    list.push_back(pom::to_json(r, inst.view));
  }
  const char* status = fail ? "fail" : inconclusive ? "inconclusive" : "pass";
  nlohmann::json doc{{"format_version", io::kFormatVersion},
                     {"system", io::system_to_json(*sys)},
                     {"suite", o.suite},
                     {"seed", o.seed},
                     {"samples", o.samples},
                     {"status", status},
                     {"axioms", list}};
  emit(doc, o, out);
  return fail ? kExitNo : inconclusive ? kExitInconclusive : kExitYes;
}

inline std::string construction_name(const std::string& s) {
  if (s == "W4" || s == "W4-interpolate") return "W4-interpolate";
  if (s == "W5" || s == "W5-complement") return "W5-complement";
  if (s == "W6" || s == "W6-split") return "W6-split";
  throw CLI::ValidationError("--construction", "expected W4, W5 or W6");
}

inline int construct_cmd(const Options& o, std::ostream& out) {
  const auto name = construction_name(o.construction);
  auto sys = io::system_from_json(io::read_file(o.system));
  const auto budget = o.budget();
  nlohmann::json outputs = nlohmann::json::object();
  std::vector<Certificate> certs;
  try {
    if (name == "W4-interpolate") {
      auto r = w4_construct(*sys, tuple_arg(o.a, "--a", *sys), tuple_arg(o.b, "--b", *sys), tuple_arg(o.c, "--c", *sys), budget);
      outputs["b'"] = io::tuple_to_json(r.b1);
      outputs["c'"] = io::tuple_to_json(r.c1);
      certs.push_back(r.certificate);
    } else if (name == "W6-split") {
      auto r = w6_split(*sys, tuple_arg(o.a_prime, "--a-prime", *sys), tuple_arg(o.a, "--a", *sys),
                        tuple_arg(o.b, "--b", *sys), tuple_arg(o.c, "--c", *sys), budget);
      outputs["e"] = io::tuple_to_json(r.e);
      outputs["f"] = io::tuple_to_json(r.f);
      certs = r.certificates;
    } else {
      auto r = w5_complement(*sys, tuple_arg(o.a_prime, "--a-prime", *sys), tuple_arg(o.a, "--a", *sys),
                             tuple_arg(o.b_prime, "--b-prime", *sys), tuple_arg(o.b, "--b", *sys),
                             tuple_arg(o.c, "--c", *sys), tuple_arg(o.c_tilde, "--c-tilde", *sys), budget);
      outputs["x'"] = io::tuple_to_json(r.x);
      outputs["x"] = io::tuple_to_json(r.x);
      certs = r.certificates;
    }
  } catch (const Error& e) {
    // Hypotheses that the search could not establish: not a failure of the
    // construction, just no answer.
    if (e.code() != ErrorCode::precondition) throw;
    emit({{"format_version", io::kFormatVersion},
          {"construction", name},
          {"status", "inconclusive"},
          {"error", error_code_name(e.code())},
          {"message", e.what()}},
         o, out);
    return kExitInconclusive;
  }
  nlohmann::json cj = nlohmann::json::array();
  for (auto c : certs) {
    c.construction = name;
    cj.push_back(io::certificate_to_json(c));
  }
  emit({{"format_version", io::kFormatVersion},
        {"construction", name},
        {"status", "certified"},
        {"outputs", outputs},
        {"certificates", cj}},
       o, out);
  return kExitYes;
}

inline void add_budget(CLI::App* cmd, Options& o) {
  cmd->add_option("--depth", o.depth, "maximum refinement depth")->check(CLI::Range(0, 24));
  cmd->add_option("--radius", o.radius, "maximum word length")->check(CLI::Range(0, 64));
  cmd->add_option("--nodes", o.nodes, "search node budget");
  cmd->add_option("--timeout", o.timeout, "wall-clock limit in seconds")->check(CLI::PositiveNumber);
}

}  // namespace detail

/// Runs the tool; never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"wtype: subequivalence, certificates and axiom checks for W(X, Γ)"};
  app.require_subcommand(1);
  Options o;

  auto* decide_c = app.add_subcommand("decide", "decide a ≼ b and print the verdict with a certificate");
  auto* verify_c = app.add_subcommand("verify", "re-check a certificate");
  auto* axioms_c = app.add_subcommand("axioms", "property-test an axiom suite");
  auto* construct_c = app.add_subcommand("construct", "run the W4/W5/W6 constructions");
  for (auto* cmd : {decide_c, verify_c, axioms_c, construct_c}) {
    cmd->add_option("--system", o.system, "system description (JSON file)")->required();
    cmd->add_option("--out", o.out, "also write the output document here");
  }
  for (auto* cmd : {decide_c, construct_c}) {
    cmd->add_option("--a", o.a, "tuple literal or @file");
    cmd->add_option("--b", o.b, "tuple literal or @file");
    detail::add_budget(cmd, o);
  }
  construct_c->add_option("--c", o.c, "tuple literal or @file");
  construct_c->add_option("--a-prime", o.a_prime, "tuple literal or @file");
  construct_c->add_option("--b-prime", o.b_prime, "tuple literal or @file");
  construct_c->add_option("--c-tilde", o.c_tilde, "tuple literal or @file");
  construct_c->add_option("--construction", o.construction, "W4, W5 or W6")->required();
  verify_c->add_option("--cert", o.cert, "certificate file")->required();
  axioms_c->add_option("--suite", o.suite, "W1-W6, W1-W4, or a comma list such as W1,W5,AUX");
  axioms_c->add_option("--seed", o.seed, "sampler seed");
  axioms_c->add_option("--samples", o.samples, "samples per axiom");

  auto diagnostic = [&](const char* code, const std::string& msg) {
    err << nlohmann::json{{"error", code}, {"message", msg}}.dump() << "\n";
  };
  try {
    app.parse(argc, argv);
    if (decide_c->parsed()) return detail::decide_cmd(o, out);
    if (verify_c->parsed()) return detail::verify_cmd(o, out);
    if (axioms_c->parsed()) return detail::axioms_cmd(o, out);
    return detail::construct_cmd(o, out);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitYes;
  } catch (const CLI::ParseError& e) {
    diagnostic("E_USAGE", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    diagnostic(error_code_name(e.code()), e.what());
    return e.code() == ErrorCode::internal ? kExitInternal : kExitData;
  } catch (const nlohmann::json::exception& e) {
    diagnostic("E_SCHEMA", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    diagnostic("E_INTERNAL", e.what());
    return kExitInternal;
  }
}

}  // namespace wtype::cli
