#pragma once

namespace classext {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace classext
