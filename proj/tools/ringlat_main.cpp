#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "ringlat/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"One- and two-atom physics on a rotating ring lattice"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string configPath, outDir = ".", format = "csv";
  int threads = 0;
  app.add_option("--config", configPath, "scenario config file (JSON)")->required();
  app.add_option("--out", outDir, "output directory");
  app.add_option("--format", format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker thread count (0: default)");

  const char* commands[] = {"band",        "wannier",       "spectrum-sweep", "ground-state",
                            "wavepacket",  "dimer-solve",   "dimer-density",  "dimer-ramp",
                            "hetero-solve", "hetero-density", "oracle-check"};
  for (const char* c : commands) app.add_subcommand(c);

  CLI11_PARSE(app, argc, argv);

  try {
    ringlat::Scenario s =
        ringlat::load_scenario(configPath, outDir, format, threads);
    s.command = app.get_subcommands().front()->get_name();
    for (const auto& path : ringlat::run_scenario(s)) std::cout << path << "\n";
    return 0;
  } catch (const ringlat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
