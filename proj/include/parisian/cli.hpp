#pragma once

#include <ostream>

namespace parisian::cli {

enum ExitCode : int {
    kSuccess = 0,
    kCheckFailure = 1,
    kUsageError = 2,
    kNumericalFailure = 3,
};

/// Entry point of the `parisian` tool; writes to the given streams instead of
/// std::cout / std::cerr so tests can run it in-process.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace parisian::cli
