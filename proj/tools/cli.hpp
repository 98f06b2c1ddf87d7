#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace voiptap::cli {

// Exit statuses: scripts depend on these values.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeFailure = 1;
inline constexpr int kUsageError = 2;

// Runs one `voiptap <subcommand> ...` invocation. `args` excludes the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Makes a running `serve` return as if interrupted (used by the SIGINT
// handler and by tests).
void request_stop();

}  // namespace voiptap::cli
