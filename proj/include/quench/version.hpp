#pragma once

namespace quench {

inline constexpr const char* version = "0.1.0";

}  // namespace quench
