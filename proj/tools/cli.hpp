#pragma once

#include <iosfwd>

namespace lcdlab {

enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitInvalid = 2 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lcdlab
