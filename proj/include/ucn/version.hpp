#pragma once

namespace ucn {
inline constexpr const char* kVersion = "0.1.0";
}
