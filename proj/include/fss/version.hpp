#pragma once

namespace fss {

inline constexpr const char* kVersion = "0.1.0";

} // namespace fss
