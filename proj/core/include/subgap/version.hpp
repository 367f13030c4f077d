#pragma once

namespace subgap {

inline constexpr const char* kVersion = "0.1.0";

} // namespace subgap
