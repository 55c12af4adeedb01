#pragma once

namespace rspan {
inline constexpr const char* kToolName = "rspan";
inline constexpr const char* kToolVersion = "1.0.0";
} // namespace rspan
