#pragma once

namespace sevdyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sevdyn
