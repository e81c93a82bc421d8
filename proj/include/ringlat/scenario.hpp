#pragma once

// Scenario-driven front end: config parsing and command dispatch.  All
// physics lives in the other modules; every command is a thin composition of
// their operations.

#include <stdexcept>
#include <string>
#include <vector>

#include "ringlat/table.hpp"

namespace ringlat {

// exit codes: 0 success, 2 config error, 3 numerical failure, 4 I/O error
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string command;
  std::string configJson;  // raw JSON text of the "params" object
  std::string outDir = ".";
  TableFormat format = TableFormat::Csv;
  int threads = 0;  // 0: leave the OpenMP default
};

Scenario load_scenario(const std::string& configPath, const std::string& outDir,
                       const std::string& format, int threads);

// Runs the command and returns the list of files written.
std::vector<std::string> run_scenario(const Scenario& scenario);

}  // namespace ringlat
