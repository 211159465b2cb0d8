#pragma once

namespace nlop {
inline constexpr const char* kVersion = "0.1.0";
}
