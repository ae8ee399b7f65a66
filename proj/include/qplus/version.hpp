#pragma once

namespace qplus {
inline constexpr const char* kVersion = "1.0.0";
}
