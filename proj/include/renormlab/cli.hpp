#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace renormlab::cli {

/// Entry point behind the renormlab executable. args excludes the program name.
/// Exit codes: 0 success, 1 detection/solver failure (error JSON on out), 2 malformed input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace renormlab::cli
