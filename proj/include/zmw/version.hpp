#pragma once

namespace zmw {
inline constexpr const char* kVersion = "zmw 0.1.0";
}
