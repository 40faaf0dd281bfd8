#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"

using namespace movosc::cli;

int main(int argc, char** argv) {
  CLI::App app{"Excitation of a harmonic oscillator with a moving trap center"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::optional<unsigned long long> seed;
  app.add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "CSV output file (default: standard output)");
  app.add_option("--seed", seed, "Seed for optimizer restarts (overrides [transport] seed)");

  using Command = int (*)(const ScenarioConfig&, std::ostream&, std::ostream&);
  const std::map<std::string, std::pair<Command, const char*>> commands{
      {"excite", {cmd_excite, "Excitation amplitude, phase and fixed-frame parameter over time"}},
      {"probs", {cmd_probs, "Fock-state transition probability tables"}},
      {"oracle", {cmd_oracle, "Compare analytic probabilities with grid propagation"}},
      {"sweep", {cmd_sweep, "Excitation across a range of one scenario parameter"}},
      {"transport", {cmd_transport, "Optimize an excitation-free transport trajectory"}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.second);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    ScenarioConfig config = load_config(config_path);
    if (seed) config.transport.seed = *seed;
    std::cerr << "# resolved configuration\n" << render_config(config) << "# end configuration\n";

    std::ostringstream buffer;
    const int rc = commands.at(name).first(config, buffer, std::cerr);
    if (out_path.empty()) {
      std::cout << buffer.str() << std::flush;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!(file << buffer.str())) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return kExitConfig;
      }
    }
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
