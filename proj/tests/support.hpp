#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crx/crx.hpp"

namespace testsupport {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string golden(const std::string& name) { return slurp(std::string(GOLDEN_DIR) + "/" + name); }

inline std::string demo_path(const std::string& rel) { return std::string(DEMO_DIR) + "/" + rel; }

inline std::vector<crx::minj::ClassDecl> classes_of(const std::string& src) {
  return crx::minj::parse_program(src, "<test>").classes;
}

inline crx::minj::EvalResult run_plain(const std::string& src, const std::string& entry,
                                       long long budget = crx::kDefaultStepBudget) {
  return crx::minj::evaluate(classes_of(src), crx::minj::parse_entry(entry), budget);
}

// Builds (P, plan) exactly the way the CLI does, from in-memory sources.
struct Bundle {
  crx::frontend::Inputs inputs;

  Bundle& mj(std::string text) {
    inputs.programs.push_back({"<mj>", std::move(text)});
    return *this;
  }
  Bundle& asp(std::string text) {
    inputs.aspects.push_back({"<asp>", std::move(text)});
    return *this;
  }
  Bundle& rules(std::string text) {
    inputs.rules.push_back({"<rules>", std::move(text)});
    return *this;
  }
  Bundle& hs(std::string text) {
    inputs.hyperspace = crx::frontend::SourceFile{"<hs>", std::move(text)};
    return *this;
  }
  Bundle& hm(std::string text) {
    inputs.hypermodule = crx::frontend::SourceFile{"<hm>", std::move(text)};
    return *this;
  }
  crx::frontend::ReadResult read(crx::frontend::Mechanism mech) const {
    return crx::frontend::read_inputs(inputs, mech);
  }
};

inline crx::pa::PaRunResult run_pa_sources(const std::vector<std::string>& mj,
                                           const std::vector<std::string>& asp,
                                           const std::string& entry,
                                           long long budget_limit = crx::kDefaultStepBudget) {
  Bundle b;
  for (const std::string& s : mj) b.mj(s);
  for (const std::string& s : asp) b.asp(s);
  auto rr = b.read(crx::frontend::Mechanism::Pa);
  crx::StepBudget budget(budget_limit);
  return crx::pa::run_pa(rr.program, rr.plan, crx::minj::parse_entry(entry), budget);
}

// Sequence of printed payloads: the observable output of a run.
inline std::vector<std::string> prints_of(const crx::minj::Trace& trace) {
  std::vector<std::string> out;
  for (const auto& e : trace)
    if (e.kind == crx::minj::EventKind::Print) out.push_back(e.detail);
  return out;
}

// Kind+detail sequence with timestamps stripped, for order-only comparisons.
inline std::vector<std::string> shape_of(const crx::minj::Trace& trace, bool keep_advice = true) {
  std::vector<std::string> out;
  for (const auto& e : trace) {
    if (!keep_advice && e.kind == crx::minj::EventKind::AdviceExecution) continue;
    out.push_back(std::string(crx::minj::event_name(e.kind)) + " " + e.detail);
  }
  return out;
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  return q + "'";
}

inline CliResult run_cli(const std::vector<std::string>& args) {
  static int serial = 0;
  std::string base = std::string("/tmp/crx_cli_") + std::to_string(getpid()) + "_" +
                     std::to_string(serial++);
  std::string cmd = shell_quote(CRX_BIN_PATH);
  for (const std::string& a : args) cmd += " " + shell_quote(a);
  cmd += " > " + base + ".out 2> " + base + ".err";
  int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(base + ".out");
  r.err = slurp(base + ".err");
  std::remove((base + ".out").c_str());
  std::remove((base + ".err").c_str());
  return r;
}

}  // namespace testsupport
