#pragma once

#include <string>
#include <vector>

namespace dcm {

// Entry point behind the `dcm` binary. Exit codes: 0 success, 1 computational
// failure (diverged training, failed gradient check), 2 usage or validation
// error.
int cli_main(int argc, const char* const* argv);

// Test convenience: run with argv-style arguments (without the program name).
int cli_run(const std::vector<std::string>& args);

}  // namespace dcm
