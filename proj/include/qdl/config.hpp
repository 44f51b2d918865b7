#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

namespace qdl {

// Memory cap for large tables; QDL_BUDGET_BYTES overrides the 1 GiB default.
inline std::size_t default_budget_bytes() {
    if (const char* s = std::getenv("QDL_BUDGET_BYTES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end != s && v > 0) return (std::size_t)v;
    }
    return std::size_t(1) << 30;
}

}  // namespace qdl
