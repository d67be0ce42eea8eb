#pragma once

namespace karlin {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace karlin
