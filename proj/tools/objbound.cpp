#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "objbound/cli.hpp"
#include "objbound/errors.hpp"

namespace {

int code(objbound::cli::ExitCode c) { return static_cast<int>(c); }

}  // namespace

int main(int argc, char** argv) {
  using objbound::cli::ExitCode;
  objbound::cli::RunConfig cfg;

  CLI::App app{"Objectivity bounds: sweeps, figure data, comparisons and oracle checks"};
  app.set_version_flag("--version", std::string(OBJBOUND_VERSION));
  app.set_config("--config", "", "key=value file; flags given on the command line take precedence");
  app.add_option("command", cfg.command, "figure1 | figure2 | compare-qr | pureloss | discord-slack | oracle")
      ->required()
      ->check(CLI::IsMember(objbound::cli::commands()));
  app.add_option("--spectrum", cfg.spectrum, "box | harmonic | bridge:D=2,omega=1 | custom:1,2,4")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--E", cfg.E, "energy cap (default 1; 2 for discord-slack)");
  app.add_option("--E-a", cfg.E_A, "discord-slack: energy cap on A (default --E)");
  app.add_option("--delta", cfg.delta, "failure fraction")->capture_default_str();
  app.add_option("--n-min", cfg.n_min, "smallest N (default 1e3; 2 for pureloss)");
  app.add_option("--n-max", cfg.n_max, "largest N (default 1e15; 1e6 for pureloss)");
  app.add_option("--points", cfg.points, "grid points, log-spaced in N")->capture_default_str();
  app.add_option("--D", cfg.D, "bridge dimension")->capture_default_str();
  app.add_option("--omega", cfg.omega, "bridge gap; omitted means the omega -> infinity limit");
  app.add_option("--seed", cfg.seed, "oracle RNG seed")->capture_default_str();
  app.add_option("--cutoff", cfg.cutoff, "Fock cutoff")->capture_default_str();
  app.add_option("--format", cfg.format, "csv | json")->capture_default_str();
  app.add_option("--out", cfg.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(ExitCode::Config);
  }

  try {
    cfg.validate();
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw std::invalid_argument("cannot open '" + cfg.out + "' for writing");
    }
    const auto rc = objbound::cli::run(cfg, cfg.out.empty() ? std::cout : file);
    if (rc == ExitCode::Oracle) std::cerr << "objbound: an asserted oracle suite failed\n";
    return code(rc);
  } catch (const objbound::ConvergenceFailure& e) {
    std::cerr << "objbound: " << e.what() << '\n';
    return code(ExitCode::Convergence);
  } catch (const objbound::InvariantViolation& e) {
    std::cerr << "objbound: " << e.what() << '\n';
    return code(ExitCode::Oracle);
  } catch (const std::exception& e) {
    std::cerr << "objbound: " << e.what() << '\n';
    return code(ExitCode::Config);
  }
}
