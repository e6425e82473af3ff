#pragma once

namespace stride {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace stride
