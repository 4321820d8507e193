#pragma once

namespace harmonium {

inline constexpr const char* version = "0.1.0";

}  // namespace harmonium
