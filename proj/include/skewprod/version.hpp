#pragma once

namespace skewprod {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kVersionString = "skewprod 0.1.0";
inline constexpr int kReportSchema = 1;

}  // namespace skewprod
