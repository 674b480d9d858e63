#pragma once

namespace airway {
inline constexpr const char* kVersion = "0.1.0";
}
