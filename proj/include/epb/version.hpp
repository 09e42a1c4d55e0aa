#pragma once

namespace epb {
inline constexpr const char* kVersion = "0.1.0";
}
