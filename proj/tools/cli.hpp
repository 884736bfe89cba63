#pragma once

namespace ghermite::cli {

/// Parses the command line and runs one subcommand. Returns the process exit status:
/// 0 on success, 2 on flag errors, 3 on numerical failures, 1 on I/O failures.
int run(int argc, const char* const* argv);

}  // namespace ghermite::cli
