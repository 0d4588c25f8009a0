#pragma once

namespace hyperscatter {

inline constexpr const char* kToolName = "hyperscatter";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace hyperscatter
