#pragma once

namespace tvvecm {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace tvvecm
