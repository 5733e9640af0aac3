#pragma once

namespace igp {
inline constexpr const char* kVersion = "0.1.0";
}
