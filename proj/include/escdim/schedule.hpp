#pragma once

#include <cmath>
#include <functional>

namespace escdim {

// Escape radii R_k, queried at the 1-based iteration step k.
using EscapeSchedule = std::function<double(int)>;

inline EscapeSchedule exponential_schedule(double base = M_E) {
    return [base](int k) { return std::pow(base, k); };
}

inline EscapeSchedule constant_schedule(double r) {
    return [r](int) { return r; };
}

}  // namespace escdim
