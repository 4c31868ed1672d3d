#pragma once

namespace relaysched {

inline constexpr const char* kVersion = "0.1.0";

} // namespace relaysched
