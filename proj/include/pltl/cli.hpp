#ifndef PLTL_CLI_HPP
#define PLTL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace pltl::cli {

enum ExitCode : int {
    kExitDecided = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitResource = 3,
    kExitInput = 4,     // unparsable formula, malformed chain
    kExitFragment = 5,  // formula or threshold outside the supported fragments
};

// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

} // namespace pltl::cli

#endif
