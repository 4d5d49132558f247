#pragma once

#include <iosfwd>

namespace dwork::cli {

enum ExitCode : int {
    kSuccess = 0,
    kFalsified = 1,
    kInputError = 2,
    kInconclusive = 3,
};

// Full command line including the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dwork::cli
