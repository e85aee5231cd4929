#pragma once

namespace marchetype {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace marchetype
