// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace lodgs {

// Runs the command line in-process. args excludes the program name.
// Exit codes: 0 success, 2 usage or validation failure, 3 I/O failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace lodgs
