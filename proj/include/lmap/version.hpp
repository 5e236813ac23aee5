#pragma once

namespace lmap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lmap
