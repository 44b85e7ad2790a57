#pragma once

namespace avgsym {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace avgsym
