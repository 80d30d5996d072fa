#pragma once

namespace fairsynth {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fairsynth
