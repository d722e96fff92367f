#pragma once

namespace gdsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gdsim
