#pragma once

namespace sscope {
inline constexpr const char* kToolName = "secant-scope";
inline constexpr const char* kToolVersion = "0.1.0";
}  // namespace sscope
