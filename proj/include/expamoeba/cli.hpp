#pragma once

#include <iosfwd>

namespace expamoeba {

/// Entry point of the command-line tool. Exit codes: 0 success, 1 numeric
/// or internal failure, 2 input error, 3 unsupported dimension or operation.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace expamoeba
