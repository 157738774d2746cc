#pragma once

namespace levykde {

inline constexpr const char* kVersion = "0.1.0";

}
