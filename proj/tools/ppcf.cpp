#include "ppcf/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace ppcf::cli;
  CLI::App app{"ppcf: probabilistic PCF workbench"};
  app.require_subcommand(1);
  RunConfig rc;
  std::string format = "json";
  std::string floor = "0";
  std::string file, file2, type;
  std::string name;
  std::vector<std::string> params;
  std::size_t confirm = 0;

  auto fmt = [&](CLI::App* c) { c->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"})); };
  auto denot_opts = [&](CLI::App* c) {
    c->add_option("--trunc", rc.trunc, "truncation N of the nat web")->check(CLI::PositiveNumber);
    c->add_option("--fix-iters", rc.fix_iters, "fixpoint iterations K");
  };

  auto* check = app.add_subcommand("check", "parse and typecheck a program");
  check->add_option("file", file)->required();
  fmt(check);

  auto* dist = app.add_subcommand("dist", "exact k-step reduction distribution");
  dist->add_option("file", file)->required();
  dist->add_option("-k,--steps", rc.steps, "reduction steps");
  dist->add_option("--mass-floor", floor, "move frontier states below this mass to the residual");
  dist->add_option("--frontier-cap", rc.frontier_cap, "fail with exit code 2 past this many frontier states");
  fmt(dist);

  auto* denot = app.add_subcommand("denot", "truncated denotation of a closed nat program");
  denot->add_option("file", file)->required();
  denot_opts(denot);
  denot->add_flag("--float", rc.use_float, "float64 arithmetic");
  fmt(denot);

  auto* adequacy = app.add_subcommand("adequacy", "compare operational and denotational distributions");
  adequacy->add_option("file", file)->required();
  adequacy->add_option("-k,--steps", rc.steps, "reduction steps");
  denot_opts(adequacy);
  adequacy->add_flag("--float", rc.use_float, "float64 arithmetic");
  adequacy->add_option("--tolerance", rc.tolerance, "allowed deviation in float mode");
  adequacy->add_option("--frontier-cap", rc.frontier_cap, "fail with exit code 2 past this many frontier states");
  fmt(adequacy);

  auto* run = app.add_subcommand("run", "sample reduction paths");
  run->add_option("file", file)->required();
  run->add_option("--seed", rc.seed);
  run->add_option("--samples", rc.samples);
  run->add_option("--max-steps", rc.max_steps);
  fmt(run);

  auto* sep = app.add_subcommand("separate", "search for a testing context distinguishing two programs");
  sep->add_option("file1", file)->required();
  sep->add_option("file2", file2)->required();
  sep->add_option("--type", type, "common type of the programs")->required();
  sep->add_option("--web-size", rc.web_size, "bound on enumerated web points");
  sep->add_option("--grid-denom", rc.grid_denom, "initial grid denominator D")->check(CLI::PositiveNumber);
  denot_opts(sep);
  sep->add_option("--confirm-steps", confirm, "confirm operationally with this many steps");
  fmt(sep);

  auto* lib = app.add_subcommand("stdlib", "print a library program");
  lib->add_option("name", name)->required()->check(CLI::IsMember(stdlib_names()));
  lib->add_option("params", params, "natural, type or probability parameters");

  CLI11_PARSE(app, argc, argv);
  rc.format = format == "table" ? Format::Table : Format::Json;
  if (sep->count("--confirm-steps")) rc.confirm_steps = confirm;

  CmdResult r;
  if (*check) {
    r = cmd_check(file, rc);
  } else if (*dist) {
    try {
      rc.mass_floor = ppcf::parse_rational(floor);
    } catch (const ppcf::Error& e) {
      std::cerr << "--mass-floor: " << e.what() << "\n";
      return DomainError;
    }
    r = cmd_dist(file, rc);
  } else if (*denot) {
    r = cmd_denot(file, rc);
  } else if (*adequacy) {
    r = cmd_adequacy(file, rc);
  } else if (*run) {
    r = cmd_run(file, rc);
  } else if (*sep) {
    r = cmd_separate(file, file2, type, rc);
  } else if (*lib) {
    r = cmd_stdlib(name, params);
  }
  (r.exit_code == Ok ? std::cout : std::cerr) << r.output;
  return r.exit_code;
}
