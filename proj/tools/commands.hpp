#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace haar::cli {

// Bad combinations of otherwise well-formed flags; reported with exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  int k = 2;
  int d = 2;
  int n = 1;
  int dA = 2;
  int dB = 2;
  int power = 1;
  int rank = 2;
  int threads = 0;
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  std::size_t batches = 0;
  double eps = 0.1;
  double delta = 0.05;
  double tol = 0.0;
  std::string mode = "auto";
  std::string ensemble = "haar";
  std::string channel = "random";
  std::string kind = "markov_pauli";
  std::string state;
  std::string target;
  std::string generator;
  std::string log_in;
  std::string log_out;
  std::string out;
  std::vector<std::string> observables;
  bool conjugate = false;
};

// Adds every subcommand to `app`, all writing into `opts`.
void register_commands(CLI::App& app, Options& opts);

// Runs the named subcommand and returns {config, results, diagnostics}; `app` is
// consulted only to learn which flags were given explicitly.
nlohmann::json run_command(const CLI::App& sub, const Options& opts);

}  // namespace haar::cli
