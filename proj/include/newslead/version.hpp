#pragma once

namespace newslead {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace newslead
