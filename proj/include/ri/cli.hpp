#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ri::cli {

// Runs one subcommand. args excludes the program name. Returns 0 on
// success, 1 on usage errors, 2 on data-validation errors. Results go to
// out, diagnostics to err; records can be piped through in via --stdin.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace ri::cli
