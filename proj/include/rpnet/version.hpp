// SPDX-License-Identifier: MIT

#pragma once

#include <string_view>

namespace rpnet {

inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace rpnet
