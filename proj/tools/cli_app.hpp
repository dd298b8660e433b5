#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cstar::cli {

/// Command dispatch for the `cstar` binary. Args exclude the program name.
/// Exit codes: 0 computed (or positive verdict), 1 negative verdict or
/// rejected certificate, 2 input error, 3 indeterminate (no solver
/// certificate).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cstar::cli
