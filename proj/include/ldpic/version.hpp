#pragma once

namespace ldpic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ldpic
