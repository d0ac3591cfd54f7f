#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mg::cli {

/// Runs one CLI invocation. Results go to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 on validation failures (bad files, bad graphs,
/// failed verification), 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mg::cli
