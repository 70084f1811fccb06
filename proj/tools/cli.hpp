#ifndef MIRKIT_TOOLS_CLI_HPP_
#define MIRKIT_TOOLS_CLI_HPP_

#include <string>
#include <vector>

namespace mirkit::cli {

// Dispatches one subcommand (score, eval, loss, batch, correlation, train).
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without program name

}  // namespace mirkit::cli

#endif  // MIRKIT_TOOLS_CLI_HPP_
