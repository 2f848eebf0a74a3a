#pragma once

namespace ostsel {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kBuildIdentifier = "ostsel 1.0.0";

}  // namespace ostsel
