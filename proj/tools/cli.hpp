#pragma once

// Command implementations behind the `compacton` executable. Kept in a
// library so tests can drive them in-process.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace compacton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitFailure = 3;

struct Context {
  std::filesystem::path out_dir = ".";  // relative artifact paths resolve here
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

/// Runs one command line (without the program name). Returns the exit code.
int run(const std::vector<std::string>& args, const Context& ctx);

/// Default tolerances, honouring COMPACTON_RTOL / COMPACTON_ATOL.
/// Throws InvalidInput when a variable is set but not a positive number.
double default_rtol();
double default_atol();

}  // namespace compacton::cli
