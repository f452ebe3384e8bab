#pragma once

namespace sheetlab {

inline constexpr const char* version = "0.1.0";

}  // namespace sheetlab
