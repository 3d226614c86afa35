// crx: weave modular concern programs into composed MinJ programs.
//
//   crx expand <files>                      show the fully expanded composition clauses
//   crx weave --mech cmp|oc <files>         emit the composed program
//   crx run --mech pa --entry C.m <files>   run under pointcut-and-advice weaving
//   crx audit --mech ... <files>            emit only the register audit
//   crx check-duality [--random N] <files>  compare the two open-class variants
//
// Exit codes: 0 success, 1 domain error (one line on stderr), 2 usage error.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crx/crx.hpp"

namespace {

struct UsageError {
  std::string msg;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw crx::Error(crx::ErrorKind::MissingInputError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string extension(const std::string& path) {
  size_t slash = path.find_last_of('/');
  size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return "";
  return path.substr(dot);
}

crx::frontend::Inputs load_inputs(const std::vector<std::string>& paths) {
  crx::frontend::Inputs in;
  for (const std::string& path : paths) {
    const std::string ext = extension(path);
    if (ext == ".mj") {
      in.programs.push_back({path, slurp(path)});
    } else if (ext == ".asp") {
      in.aspects.push_back({path, slurp(path)});
    } else if (ext == ".rules") {
      in.rules.push_back({path, slurp(path)});
    } else if (ext == ".hs") {
      if (in.hyperspace) throw UsageError{"more than one hyperspace file"};
      in.hyperspace = crx::frontend::SourceFile{path, slurp(path)};
    } else if (ext == ".hm") {
      if (in.hypermodule) throw UsageError{"more than one hypermodule file"};
      in.hypermodule = crx::frontend::SourceFile{path, slurp(path)};
    } else {
      throw UsageError{"unrecognized input '" + path +
                       "' (expected .mj, .asp, .rules, .hs, or .hm)"};
    }
  }
  return in;
}

struct Opts {
  std::vector<std::string> files;
  std::string mech;
  std::string variant = "nonreactive";
  std::string entry;
  bool trace = false;
  bool audit = false;
  bool check_duality = false;
  long long budget = crx::kDefaultStepBudget;
  int random = 0;
  unsigned seed = 1;
};

void print_program(const std::vector<crx::minj::ClassDecl>& classes) {
  std::cout << crx::minj::pretty_print(crx::minj::canonicalize(classes));
}

int cmd_expand(const Opts& o) {
  auto rr = crx::frontend::read_inputs(load_inputs(o.files), crx::frontend::Mechanism::Cmp);
  crx::StepBudget budget(o.budget);
  auto result = crx::cmp::weave_cmp(rr.program, rr.plan, *rr.hyperspace, budget);
  std::cout << crx::cmp::render_clauses(result.hypermodule, result.clauses);
  return 0;
}

int report_duality(const crx::oc::DualityReport& rep, int programs) {
  if (!rep.equal) {
    std::cerr << "DUALITY FAILED: "
              << (!rep.detail.empty() ? rep.detail
                                      : "nonreactive: " +
                                            (rep.nonreactive_error.empty() ? "ok"
                                                                           : rep.nonreactive_error) +
                                            ", reactive: " +
                                            (rep.reactive_error.empty() ? "ok" : rep.reactive_error))
              << "\n";
    return 1;
  }
  if (!rep.nonreactive_error.empty())
    std::cout << "DUALITY OK (both variants fail: " << rep.nonreactive_error << ")\n";
  else
    std::cout << "DUALITY OK (" << programs << " programs)\n";
  return 0;
}

int cmd_weave(const Opts& o) {
  auto in = load_inputs(o.files);
  if (o.mech == "cmp") {
    auto rr = crx::frontend::read_inputs(in, crx::frontend::Mechanism::Cmp);
    crx::StepBudget budget(o.budget);
    auto result = crx::cmp::weave_cmp(rr.program, rr.plan, *rr.hyperspace, budget);
    print_program(result.classes);
    if (o.audit) std::cout << "\n" << result.output.audit.to_text();
    return 0;
  }
  auto rr = crx::frontend::read_inputs(in, crx::frontend::Mechanism::Oc);
  if (o.check_duality) return report_duality(crx::oc::check_duality(rr.program, rr.plan, o.budget), 1);
  const auto variant =
      o.variant == "reactive" ? crx::oc::OcVariant::Reactive : crx::oc::OcVariant::Nonreactive;
  crx::StepBudget budget(o.budget);
  auto result = crx::oc::weave_oc(rr.program, rr.plan, variant, budget);
  print_program(result.classes);
  if (o.audit) std::cout << "\n" << result.output.audit.to_text();
  return 0;
}

int cmd_run(const Opts& o) {
  auto rr = crx::frontend::read_inputs(load_inputs(o.files), crx::frontend::Mechanism::Pa);
  crx::minj::ExprPtr entry = crx::minj::parse_entry(o.entry);
  crx::StepBudget budget(o.budget);
  auto result = crx::pa::run_pa(rr.program, rr.plan, entry, budget);
  if (o.trace) {
    std::cout << crx::minj::format_trace(result.trace);
  } else {
    for (const crx::minj::TraceEvent& e : result.trace)
      if (e.kind == crx::minj::EventKind::Print) std::cout << e.detail << "\n";
  }
  std::cout << "=> " << crx::minj::render(result.value) << "\n";
  if (o.audit) std::cout << result.audit.to_text();
  return 0;
}

int cmd_audit(const Opts& o) {
  auto in = load_inputs(o.files);
  crx::StepBudget budget(o.budget);
  crx::RegisterAudit audit;
  if (o.mech == "cmp") {
    auto rr = crx::frontend::read_inputs(in, crx::frontend::Mechanism::Cmp);
    audit = crx::cmp::weave_cmp(rr.program, rr.plan, *rr.hyperspace, budget).output.audit;
  } else if (o.mech == "oc") {
    auto rr = crx::frontend::read_inputs(in, crx::frontend::Mechanism::Oc);
    const auto variant =
        o.variant == "reactive" ? crx::oc::OcVariant::Reactive : crx::oc::OcVariant::Nonreactive;
    audit = crx::oc::weave_oc(rr.program, rr.plan, variant, budget).output.audit;
  } else {
    if (o.entry.empty()) throw UsageError{"--mech pa needs --entry"};
    auto rr = crx::frontend::read_inputs(in, crx::frontend::Mechanism::Pa);
    audit = crx::pa::run_pa(rr.program, rr.plan, crx::minj::parse_entry(o.entry), budget).audit;
  }
  std::cout << audit.to_text();
  return 0;
}

int cmd_check_duality(const Opts& o) {
  if (o.files.empty() && o.random == 0)
    throw UsageError{"check-duality needs input files, --random N, or both"};
  int programs = 0;
  if (!o.files.empty()) {
    auto rr = crx::frontend::read_inputs(load_inputs(o.files), crx::frontend::Mechanism::Oc);
    auto rep = crx::oc::check_duality(rr.program, rr.plan, o.budget);
    if (!rep.equal || !rep.nonreactive_error.empty()) return report_duality(rep, 1);
    ++programs;
  }
  std::mt19937 rng(o.seed);
  for (int i = 0; i < o.random; ++i) {
    auto gen = crx::oc::gen_duality_case(rng);
    auto rep = crx::oc::check_duality(gen.program, gen.plan, o.budget);
    if (!rep.equal || !rep.nonreactive_error.empty()) {
      if (rep.equal) {
        std::cerr << "DUALITY FAILED: random case " << i << " (seed " << o.seed
                  << ") errored: " << rep.nonreactive_error << "\n";
        return 1;
      }
      std::cerr << "random case " << i << " (seed " << o.seed << "): ";
      return report_duality(rep, 1);
    }
    ++programs;
  }
  std::cout << "DUALITY OK (" << programs << " programs)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crx weaves modular concern programs into composed MinJ programs"};
  app.require_subcommand(1);
  Opts o;

  auto add_files = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("files", o.files, "input files (.mj .asp .rules .hs .hm)");
    if (required) opt->required();
  };
  auto add_budget = [&](CLI::App* cmd) {
    cmd->add_option("--step-budget", o.budget, "weaving step limit")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* expand = app.add_subcommand("expand", "print the expanded composition clauses");
  add_files(expand, true);
  add_budget(expand);

  CLI::App* weave = app.add_subcommand("weave", "compose and print the woven program");
  weave->add_option("--mech", o.mech, "weaving mechanism")
      ->required()
      ->check(CLI::IsMember({"cmp", "oc"}));
  weave->add_option("--variant", o.variant, "open-class weaving variant")
      ->check(CLI::IsMember({"nonreactive", "reactive"}));
  weave->add_flag("--check-duality", o.check_duality, "run both open-class variants and compare");
  weave->add_flag("--audit", o.audit, "append the register audit");
  add_files(weave, true);
  add_budget(weave);

  CLI::App* run = app.add_subcommand("run", "run a program under advice weaving");
  run->add_option("--mech", o.mech, "weaving mechanism")->check(CLI::IsMember({"pa"}));
  run->add_option("--entry", o.entry, "entry point, as Class.method")->required();
  run->add_flag("--trace", o.trace, "print the full event trace");
  run->add_flag("--audit", o.audit, "append the register audit");
  add_files(run, true);
  add_budget(run);

  CLI::App* audit = app.add_subcommand("audit", "print only the register audit");
  audit->add_option("--mech", o.mech, "weaving mechanism")
      ->required()
      ->check(CLI::IsMember({"cmp", "pa", "oc"}));
  audit->add_option("--variant", o.variant, "open-class weaving variant")
      ->check(CLI::IsMember({"nonreactive", "reactive"}));
  audit->add_option("--entry", o.entry, "entry point for --mech pa");
  add_files(audit, true);
  add_budget(audit);

  CLI::App* dual = app.add_subcommand("check-duality", "compare the two open-class variants");
  add_files(dual, false);
  dual->add_option("--random", o.random, "also check N randomized programs")
      ->check(CLI::NonNegativeNumber);
  dual->add_option("--seed", o.seed, "seed for --random");
  add_budget(dual);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(expand)) return cmd_expand(o);
    if (app.got_subcommand(weave)) return cmd_weave(o);
    if (app.got_subcommand(run)) return cmd_run(o);
    if (app.got_subcommand(audit)) return cmd_audit(o);
    return cmd_check_duality(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.msg << "\n";
    return 2;
  } catch (const crx::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
