#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ifmsim {

/// Parsed command-line configuration. One run = one command, one output
/// table; all randomness derives from (seed, trial index), so identical
/// configurations produce byte-identical output.
struct RunConfig {
  std::string command;
  std::string n_splitters = "100";  ///< integer or start..end[..step] range
  std::string eta = "0";            ///< comma list of reals in [0, 1)
  std::string target_p;             ///< comma list of reals in (0, 1)
  std::string mode = "ideal";      ///< ideal | finite
  long long trials = 10000;
  std::uint64_t seed = 1;
  std::string output_format = "csv";  ///< csv | json
  std::string output_path = "-";      ///< "-" = stdout
  bool no_permutations = false;       ///< bell-measure: skip Table-row draws
};

/// Parses argv-style arguments (program name excluded), runs the selected
/// command and writes its table to output_path (or `out`). Returns the
/// process exit code: 0 on success, 2 on a usage error (diagnostics on
/// `err`), 1 on a runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ifmsim
