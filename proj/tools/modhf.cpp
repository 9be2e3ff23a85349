// Command-line front end: simulate / norm / verify.

#include <CLI11.hpp>

#include "modhf/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"modhf: coupled Hartree-Fock spectral solver and modulation-space toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", bounds_path = "data/verify_bounds.json";
  std::uint64_t seed = 0;

  auto* sim = app.add_subcommand("simulate", "integrate a configured Cauchy problem");
  sim->add_option("--config", config_path, "JSON problem configuration")->required();
  sim->add_option("--out-dir", out_dir, "output directory");
  sim->add_option("--seed", seed, "seed for randomized initial data");

  std::string field_path, method = "decomp";
  double p = 2.0, q = 2.0, s = 0.0;
  auto* norm = app.add_subcommand("norm", "modulation norm of a stored field");
  norm->add_option("field", field_path, "field file (MHFF)")->required();
  norm->add_option("-p", p, "spatial exponent");
  norm->add_option("-q", q, "frequency exponent");
  norm->add_option("-s", s, "weight exponent");
  norm->add_option("--method", method, "stft or decomp");

  std::string suite, mode = "assert";
  auto* verify = app.add_subcommand("verify", "run an estimate-verification suite");
  verify->add_option("suite", suite, "suite id")->required();
  verify->add_option("--mode", mode, "record or assert");
  verify->add_option("--bounds", bounds_path, "bounds store (JSON)");
  verify->add_option("--out-dir", out_dir, "report directory (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (sim->parsed()) return modhf::cli::run_simulate(config_path, out_dir, seed);
  if (norm->parsed()) return modhf::cli::run_norm(field_path, p, q, s, method);
  return modhf::cli::run_verify(suite, mode, bounds_path,
                                verify->count("--out-dir") ? out_dir : "");
}
