#pragma once

#include <iosfwd>

namespace lfperf {

/// Entry point of the `lfperf` binary. Exit codes: 0 ok, 1 runtime failure,
/// 2 usage or config error.
int run_cli(int argc, char** argv);

/// Same, with explicit streams for tests.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lfperf
