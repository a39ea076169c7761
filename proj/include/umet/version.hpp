#pragma once

namespace umet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace umet
