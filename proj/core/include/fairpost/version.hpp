#pragma once

namespace fairpost {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fairpost
