#pragma once

namespace respole::cli {

// Exit codes: 0 success, 1 physics or validation error, 2 I/O, usage or
// configuration error.
int run_cli(int argc, char** argv);

}  // namespace respole::cli
