#pragma once

namespace slt {

inline constexpr const char* version() { return "0.1.0"; }

} // namespace slt
