// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "lodgs/scene.hpp"

namespace lodgs {

// Binary when the path ends in anything but ".json"; JSON otherwise. Both
// forms round-trip bit-exactly and load through the same validation.
void save_scene(const LoDTree& tree, const std::string& path);

// Format is sniffed from the leading bytes, not the extension.
LoDTree load_scene(const std::string& path);

}  // namespace lodgs
