#pragma once

namespace ionxxz {

inline constexpr const char* version_string = "0.1.0";

}
