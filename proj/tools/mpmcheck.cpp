#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace mpm::cli;
  CLI::App app{"Finite-space multiparameter martingale checks"};
  app.require_subcommand(1);

  RunConfig config;
  std::string format = "json";
  std::string out, constants;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--filtration", config.filtration, "filtration file or constructor spec")->required();
    sub->add_option("--out", out, "report path (default: stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", config.threads, "worker threads");
  };
  auto add_seeded = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "base seed");
    sub->add_option("--trials", config.trials, "number of trials");
  };

  auto* gen = app.add_subcommand("gen-filtration", "write a constructor-built filtration to --out");
  add_common(gen);

  auto* structure = app.add_subcommand("check-structure", "F4 condition and regularity constant");
  add_common(structure);
  structure->add_option("--tol", config.tol, "F4 tolerance");

  auto* identities = app.add_subcommand("verify-identities", "one-step calculus identities");
  add_common(identities);
  add_seeded(identities);
  identities->add_option("--tol", config.tol, "residual tolerance");

  auto* theorem_a = app.add_subcommand("verify-theorem-a", "one-parameter weighted square-function bound");
  add_common(theorem_a);
  add_seeded(theorem_a);
  theorem_a->add_option("--constant", config.constant, "constant on the right-hand side");

  auto* theorem_b = app.add_subcommand("verify-theorem-b", "k-parameter weighted bound with a derived budget");
  add_common(theorem_b);
  add_seeded(theorem_b);
  theorem_b->add_option("--constants", constants, "baseline constants file");

  auto* brossard = app.add_subcommand("brossard", "good-lambda certificate for P(Sf > lambda)");
  add_common(brossard);
  add_seeded(brossard);
  brossard->add_option("--constants", constants, "baseline constants file");
  brossard->add_option("--lambda", config.lambda, "absolute threshold");
  brossard->add_option("--lambda-quantile", config.lambda_quantile, "threshold as a quantile of f*");

  auto* pnorm = app.add_subcommand("pnorm", "E[(Sf)^p] against E[(f*)^p]");
  add_common(pnorm);
  add_seeded(pnorm);
  pnorm->add_option("--p", config.p, "exponent");

  auto* search = app.add_subcommand("search", "extremal search over martingale pairs");
  add_common(search);
  add_seeded(search);
  search->add_option("--objective", config.objective, "theorem_a, theorem_b or pnorm");
  search->add_option("--p", config.p, "exponent for the pnorm objective");
  search->add_option("--budget", config.budget, "hill-climbing iterations per trial");
  search->add_option("--constants", constants, "baseline constants file (bounds theorem_b)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  config.command = *parse_command(app.get_subcommands().front()->get_name());
  config.format = format == "csv" ? Format::Csv : Format::Json;
  if (!out.empty()) config.out = out;
  if (!constants.empty()) {
    if (!std::filesystem::exists(constants)) {
      std::cerr << "mpmcheck: error: --constants: no such file " << constants << "\n";
      return kExitConfig;
    }
    config.constants = constants;
  }
  return run(config, std::cout, std::cerr);
}
