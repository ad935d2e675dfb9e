#pragma once

// Single include point for the vendored nlohmann/json header so the
// warning settings stay in one place.
#if defined(__GNUC__)
#pragma GCC system_header
#endif
#include "json.hpp"
