#pragma once

namespace horolab {

inline constexpr const char* kVersion = "0.1.0";

}
