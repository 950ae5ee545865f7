#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bitprobe/error.hpp"
#include "bitprobe/graph.hpp"

namespace bitprobe::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitGuaranteeViolated = 1,
  kExitEncodeFailed = 2,
  kExitBudgetExceeded = 3,
  kExitUsage = 64,
};

/// Malformed set file or command-line value.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Reads one non-negative decimal element per line (blank lines ignored).
/// Throws InputError on malformed lines, duplicates, or elements ≥ 2^universe_bits.
VertexSet read_set_file(const std::filesystem::path& path, unsigned universe_bits);

/// Runs the command line `argv` (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload for tests: args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bitprobe::cli
