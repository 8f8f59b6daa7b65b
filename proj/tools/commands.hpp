#pragma once

#include <iosfwd>

namespace qsep::cli {

// 0 = result produced, 1 = input or precondition error, 2 = budget exceeded.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qsep::cli
