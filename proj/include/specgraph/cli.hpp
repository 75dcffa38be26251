#pragma once

namespace specgraph {

/// Full command-line front end; returns the process exit code
/// (0 success, 1 runtime/numerical failure, 2 usage/validation).
int run_cli(int argc, const char* const* argv);

}  // namespace specgraph
