#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace oracle {

// Standard error of a Bernoulli frequency from `trials` samples. The 1/trials
// floor keeps ranks with (near) zero probability from demanding exact zeros.
inline double binomial_se(double p, std::uint64_t trials) {
    const double n = static_cast<double>(trials);
    return std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n);
}

}  // namespace oracle
