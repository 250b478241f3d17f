#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace pf::cli;
  CLI::App app{"pearlforge: maximal-class p-groups, pearls and fusion certificates"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  uint64_t budget = 0;
  app.add_option("--budget", budget, "work budget (subgroup nodes, automorphism candidates, or group classes)")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", opt.threads, "worker count (accepted; execution is sequential)")
      ->check(CLI::PositiveNumber);
  app.add_option("--lambda", opt.lambda, "torus generator lambda in F_p^*, 0 for the least primitive root");
  app.add_option("--emit-presentations", opt.emit_dir, "write derived presentations into this directory");
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--catalog", opt.catalog, "catalog directory (default: $PEARLFORGE_CATALOG or the built-in one)");

  std::string file;
  auto* analyze = app.add_subcommand("analyze", "series, rank, pearl candidates, towers and scan");
  analyze->add_option("file", file, "pc presentation")->required();
  auto* table = app.add_subcommand("verify-table", "check the rank table on catalog groups");
  auto* derive = app.add_subcommand("derive", "enumerate a family of maximal-class groups");
  derive->add_option("spec-file", file, "JSON constraints")->required();
  auto* aut = app.add_subcommand("aut", "automorphism group summary");
  aut->add_option("file", file, "pc presentation")->required();
  auto* towers = app.add_subcommand("towers", "normalizer towers of pearl candidates");
  towers->add_option("file", file, "pc presentation")->required();
  auto* cert = app.add_subcommand("certificate", "fusion system certificate");
  cert->add_option("file", file, "pc presentation")->required();
  cert->add_option("--pearl-kind", opt.pearl_kind, "a: abelian, e: extraspecial")
      ->check(CLI::IsMember({"a", "e"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }
  if (budget) opt.budget = budget;

  Report r;
  if (*analyze) r = run_analyze(file, opt);
  else if (*table) r = run_verify_table(opt);
  else if (*derive) r = run_derive(file, opt);
  else if (*aut) r = run_aut(file, opt);
  else if (*towers) r = run_towers(file, opt);
  else r = run_certificate(file, opt);
  std::cout << r.render(opt.format);
  return r.exit_code();
}
