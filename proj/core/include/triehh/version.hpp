#pragma once

namespace triehh {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace triehh
