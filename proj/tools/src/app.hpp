#pragma once

namespace cavkin::cli {

/// Entry point of the cavkin tool. Exit codes: 0 ok, 1 I/O or internal
/// failure, 2 usage or config error, 3 numerical abort.
int run_cli(int argc, char** argv);

}  // namespace cavkin::cli
