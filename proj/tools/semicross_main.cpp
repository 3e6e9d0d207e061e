// Command-line front end: loads a system (built-in fixture or JSON file),
// dispatches to the library, and emits a JSON report.
//
// Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 bad
// configuration or I/O.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "semicross/runner.hpp"

namespace {

using semicross::RunConfig;

void add_system_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--fixture", cfg.fixture, "built-in fixture name (see list-fixtures)");
  cmd->add_option("--system", cfg.system_path, "path to a JSON system description");
  cmd->add_option("--seed", cfg.seed, "sampling seed");
  cmd->add_option("--count", cfg.count, "samples per check");
  cmd->add_option("--tol", cfg.tol, "verification tolerance")->envname("SEMICROSS_TOL");
}

int emit(const semicross::RunResult& result, const RunConfig& cfg) {
  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) {
      std::cerr << "cannot write " << cfg.output_path << "\n";
      return 2;
    }
    out << result.report.dump(2) << "\n";
  }
  if (cfg.json_output || cfg.output_path.empty()) {
    std::cout << result.report.dump(2) << "\n";
  } else {
    const auto& summary = result.report["summary"];
    std::cout << result.report["command"].get<std::string>() << ": "
              << (summary["pass"].get<bool>() ? "pass" : "FAIL") << " ("
              << summary["checks"] << " checks, " << summary["failed"] << " failed)\n";
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semicross: crossed products of block C*-algebras by endomorphism semigroups"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("-o,--output", cfg.output_path, "write the JSON report to a file");
  app.add_flag("--json", cfg.json_output, "print the JSON report to stdout");

  std::string x_str = "1";
  std::string gens_str;

  auto* check = app.add_subcommand("check-system", "analyze a system and report the verdict");
  add_system_options(check, cfg);
  check->add_option("--expect", cfg.expect,
                    "fail unless the verdict matches: representable | not-representable");

  auto* transfer = app.add_subcommand("transfer", "synthesize and validate a transfer map");
  add_system_options(transfer, cfg);
  transfer->add_option("--x", x_str, "cone element, e.g. 2 or 1,0");

  auto* mulcmd = app.add_subcommand("mul", "multiply two elements");
  add_system_options(mulcmd, cfg);
  mulcmd->add_option("--lhs", cfg.lhs, "left factor (expression or @file.json)")->required();
  mulcmd->add_option("--rhs", cfg.rhs, "right factor")->required();

  auto* norm = app.add_subcommand("norm", "two-sided enveloping norm certificate");
  add_system_options(norm, cfg);
  norm->add_option("--element", cfg.element, "element expression, e.g. 1+u1")->required();
  norm->add_option("--kmax", cfg.kmax, "number of certificate stages");
  norm->add_option("--growth-bound", cfg.growth_bound, "support size cap for powers");

  auto* regrep = app.add_subcommand("regrep", "truncated regular representation checks");
  add_system_options(regrep, cfg);
  regrep->add_option("--window", cfg.window, "degree window radius");
  regrep->add_option("--gens", gens_str, "comma-separated generator degrees, e.g. 1,2");
  regrep->add_option("--state", cfg.state, "trace | @density.json");
  regrep->add_option("--margin", cfg.margin, "interior margin (default window/2)");
  regrep->add_option("--element", cfg.element, "also represent this element");
  regrep->add_option("--kmax", cfg.kmax, "certificate stages for the element cross-check");

  auto* selftest = app.add_subcommand("selftest", "run the whole invariant battery");
  add_system_options(selftest, cfg);

  app.add_subcommand("list-fixtures", "describe the built-in systems");

  for (auto* sub : {check, transfer, mulcmd, norm, regrep, selftest,
                    app.get_subcommand("list-fixtures")})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) cfg.command = semicross::Command::CheckSystem;
    if (transfer->parsed()) {
      cfg.command = semicross::Command::Transfer;
      cfg.x = semicross::detail::parse_degree(x_str, static_cast<int>(
          std::count(x_str.begin(), x_str.end(), ',') + 1));
    }
    if (mulcmd->parsed()) cfg.command = semicross::Command::Mul;
    if (norm->parsed()) cfg.command = semicross::Command::Norm;
    if (regrep->parsed()) {
      cfg.command = semicross::Command::RegRep;
      if (!gens_str.empty())
        for (std::size_t pos = 0; pos <= gens_str.size();) {
          std::size_t next = gens_str.find(',', pos);
          std::string tok = gens_str.substr(pos, next == std::string::npos ? next : next - pos);
          cfg.gens.push_back(semicross::GroupElement::scalar(std::stoll(tok)));
          if (next == std::string::npos) break;
          pos = next + 1;
        }
    }
    if (selftest->parsed()) cfg.command = semicross::Command::SelfTest;
    if (app.get_subcommand("list-fixtures")->parsed())
      cfg.command = semicross::Command::ListFixtures;
  } catch (const std::exception& e) {
    std::cerr << "bad arguments: " << e.what() << "\n";
    return 2;
  }

  semicross::RunResult result = semicross::run(cfg);
  return emit(result, cfg);
}
