#pragma once

namespace mdcs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mdcs
