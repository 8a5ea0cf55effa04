#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "psearch/cli.hpp"

namespace {

int emit(const psearch::CommandResult& result, const std::string& out_path) {
  if (result.exit_code == 2) {
    std::cerr << result.report;
    return 2;
  }
  if (out_path.empty()) {
    std::cout << result.report;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open '" << out_path << "' for writing\n";
      return 2;
    }
    out << result.report;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  using psearch::Command;
  using psearch::OutputFormat;
  using psearch::Representation;

  CLI::App app{"partial quantum search: exact simulation, reduced dynamics, planners and probes"};
  app.set_config("--config");
  app.require_subcommand(1);

  psearch::RunConfig cfg;
  std::string rep = "full";
  std::string format = "json";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "report format: json or csv");
    sub->add_option("--out", cfg.output_path, "write the report to this file");
  };
  const auto add_space = [&](CLI::App* sub, bool need_n, bool need_k) {
    auto* n = sub->add_option("--N", cfg.n_items, "number of items");
    auto* k = sub->add_option("--K", cfg.n_blocks, "number of blocks");
    if (need_n) n->required();
    if (need_k) k->required();
    sub->add_option("--target", cfg.target_index, "target item index");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run an explicit operator plan")->configurable();
  add_space(simulate, true, true);
  simulate->add_option("--plan", cfg.plan_text, "operator plan, e.g. G1:1,G2:20,G1:20")->required();
  simulate->add_option("--rep", rep, "full, reduced_exact or reduced_asymptotic");
  add_common(simulate);

  CLI::App* grk = app.add_subcommand("grk", "run the partial search at its optimal iteration counts")->configurable();
  add_space(grk, true, true);
  grk->add_option("--rep", rep, "full, reduced_exact or reduced_asymptotic");
  add_common(grk);

  CLI::App* params = app.add_subcommand("params", "optimal iteration parameters for a block count")->configurable();
  add_space(params, false, true);
  add_common(params);

  CLI::App* verify = app.add_subcommand("verify", "run the built-in verification suites")->configurable();
  add_space(verify, false, false);
  verify->add_option("--suite", cfg.suite, "lie, group, oracle, spectra or all");
  verify->add_option("--gamma", cfg.gamma, "single block angle for the lie and group suites");
  verify->add_option("--seed", cfg.seed, "random seed");
  add_common(verify);

  CLI::App* scan = app.add_subcommand("scan", "grid scan of three-segment plans against the baseline")->configurable();
  add_space(scan, true, true);
  scan->add_option("--grid-step", cfg.grid_step, "grid step in scaled query units");
  add_common(scan);

  CLI::App* conjecture = app.add_subcommand("conjecture", "randomized probe for four-segment advantage")->configurable();
  add_space(conjecture, false, true);
  conjecture->add_option("--grid-step", cfg.grid_step, "grid step in scaled query units");
  conjecture->add_option("--seed", cfg.seed, "random seed");
  conjecture->add_option("--starts", cfg.starts, "number of random start states");
  add_common(conjecture);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (simulate->parsed()) cfg.command = Command::simulate;
  else if (grk->parsed()) cfg.command = Command::grk;
  else if (params->parsed()) cfg.command = Command::params;
  else if (verify->parsed()) cfg.command = Command::verify;
  else if (scan->parsed()) cfg.command = Command::scan;
  else cfg.command = Command::conjecture;

  if (rep == "full") cfg.representation = Representation::full;
  else if (rep == "reduced_exact") cfg.representation = Representation::reduced_exact;
  else if (rep == "reduced_asymptotic") cfg.representation = Representation::reduced_asymptotic;
  else {
    std::cerr << "error: unknown representation '" << rep << "'\n";
    return 2;
  }

  if (format == "json") cfg.output_format = OutputFormat::json;
  else if (format == "csv") cfg.output_format = OutputFormat::csv;
  else {
    std::cerr << "error: unknown format '" << format << "'\n";
    return 2;
  }

  return emit(psearch::run_command(cfg), cfg.output_path);
}
