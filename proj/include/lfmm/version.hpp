#pragma once

namespace lfmm {

inline constexpr const char* version = "0.1.0";

} // namespace lfmm
