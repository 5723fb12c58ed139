// tms: evolve / check / convergence / decay.

#include <CLI11.hpp>
#include <iostream>

#include "tms/errors.hpp"
#include "tms/parallel.hpp"
#include "tms/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Timelike minimal submanifold evolution and diagnostics"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (0 = all hardware threads)")->check(CLI::NonNegativeNumber);

  std::string config_path;
  auto* evolve = app.add_subcommand("evolve", "Evolve a configured run and write its outputs");
  evolve->add_option("--config", config_path, "Config file (key = value)")->required();

  std::string suite;
  std::uint64_t seed = 0;
  auto* check = app.add_subcommand("check", "Run a property battery");
  check->add_option("--suite", suite, "identities | nullforms | commutators | expansion")->required();
  check->add_option("--seed", seed, "Random seed for the battery");

  int refinements = 3;
  auto* convergence = app.add_subcommand("convergence", "Observed orders over N, 2N (, 4N)");
  convergence->add_option("--config", config_path, "Config file")->required();
  convergence->add_option("--refinements", refinements, "2 or 3")->required();

  std::string fit_only;
  auto* decay = app.add_subcommand("decay", "Evolve and fit the decay exponent of N1");
  decay->add_option("--config", config_path, "Config file")->required();
  decay->add_option("--fit-only", fit_only, "Fit an existing norms.csv instead of evolving");

  CLI11_PARSE(app, argc, argv);
  tms::set_worker_count(workers);

  try {
    if (*evolve) return tms::run_evolve(tms::load_config(config_path), std::cout).exit_code;
    if (*check) return tms::run_check(suite, seed, std::cout);
    if (*convergence) {
      tms::run_convergence(tms::load_config(config_path), refinements, std::cout);
      return 0;
    }
    if (*decay) {
      const tms::SimConfig config = tms::load_config(config_path);
      if (!fit_only.empty()) {
        tms::fit_norms_csv(fit_only, config.n, std::cout);
        return 0;
      }
      int code = 0;
      tms::run_decay(config, std::cout, &code);
      return code;
    }
  } catch (const tms::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
