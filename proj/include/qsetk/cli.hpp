#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsetk {

// Full command surface: repl, run, check, fock. Streams are injected so
// tests can drive the binary's behavior in-process.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace qsetk
