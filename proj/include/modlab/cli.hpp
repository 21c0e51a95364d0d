#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modlab::cli {

inline constexpr int kSuccess = 0;
inline constexpr int kVerificationFailure = 1;
inline constexpr int kUsageError = 2;

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics and one-line error reasons to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modlab::cli
