#pragma once

namespace rgn {
inline constexpr const char* kEngineVersion = "0.1.0";
}
