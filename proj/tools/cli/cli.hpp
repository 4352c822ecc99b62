#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dl2u/montecarlo.hpp"
#include "dl2u/sequences.hpp"
#include "io.hpp"

namespace dl2u::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitDomain = 3,
  kExitOverflow = 4,
  kExitVerifyFailed = 5,
};

inline constexpr const char* kSeedEnv = "DL2U_SEED";

/// Fully resolved settings of one run. Serialised into every output's
/// metadata; feeding that metadata back through --config reproduces the run.
struct CliConfig {
  std::string command;
  ModelParams params;
  std::uint64_t seed = 0;

  // simulate
  std::uint64_t rep = 0;

  // experiment, hist
  std::int64_t paths = 500;
  std::int64_t reps = 100;
  double alpha_level = 0.05;

  // table
  std::string table_id = "1a";
  TableOptions table;

  // hist
  std::string panel = "left";
  int bins = 50;
  std::optional<double> window_lo;
  std::optional<double> window_hi;

  // verify
  std::int64_t draws = 100000;
  bool homoskedastic_only = false;
  bool diagnostics = true;

  unsigned threads = 1;
  std::string in;
  std::string out;
};

/// Defaults of a command before flags and --config are applied. The hist
/// panels follow the two figure setups (left: n = 1000, c = d = 1,
/// alpha = 0.5; right: n = 300, c = 0.5, d = 1, alpha = 0.5, explosive).
CliConfig default_config(const std::string& command, const std::string& panel = "left");

/// Only the fields `cfg.command` uses; never `in`, `out` or `threads`.
json config_to_json(const CliConfig& cfg);

/// Overlays the fields present in `j` onto `cfg`.
void apply_config_json(const json& j, CliConfig& cfg);

/// Seed from DL2U_SEED, or 0 when unset. A malformed value is a usage error.
std::uint64_t default_seed();

/// Entry point behind main(). args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dl2u::cli
