#pragma once

namespace snlab {
inline constexpr const char* kVersion = "0.1.0";
}
