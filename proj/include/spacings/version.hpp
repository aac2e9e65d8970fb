#pragma once

namespace spacings {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spacings
