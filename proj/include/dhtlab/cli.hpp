#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dhtlab::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, usage_error = 2 };

/// Runs one subcommand (kernels, factorize, norms, verify, weaktype, mc); args
/// exclude the program name. Results go to `out` unless --output is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace dhtlab::cli
