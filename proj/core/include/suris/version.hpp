#pragma once

namespace suris {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace suris
