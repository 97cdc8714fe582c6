#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roadjoin::cli {

// Exit codes: 0 success, 1 I/O, parse or data error, 2 invalid flags.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace roadjoin::cli
