#ifndef BRICKWORK_CLI_H_
#define BRICKWORK_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace brickwork::cli {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitUsage = 2;

/// Subcommands: sample, distribution, amplitude, partition, verify-gadgets,
/// reduce, certify, ensemble-stats. Results go to `out`, diagnostics to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
/// Same, without the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace brickwork::cli

#endif  // BRICKWORK_CLI_H_
