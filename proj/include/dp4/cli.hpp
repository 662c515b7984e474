#pragma once

namespace dp4 {

/// Entry point of the dp4 tool. Exit codes: 0 success, 1 usage or invalid
/// input, 2 an undecided oracle run.
int run_cli(int argc, char** argv);

}  // namespace dp4
