// SPDX-License-Identifier: Apache-2.0
#include "lodgs/cli.hpp"

int main(int argc, char** argv) {
    return lodgs::run_cli({argv + 1, argv + argc});
}
