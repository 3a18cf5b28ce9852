#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdbp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitHalted = 2;

/// Runs one command; args excludes the program name.
///
/// CSV goes to `out` unless -o names a file; messages go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdbp::cli
