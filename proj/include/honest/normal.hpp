#pragma once

#include <cmath>
#include <stdexcept>

namespace honest {

// Standard normal CDF.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

// Inverse standard normal CDF (Wichura's PPND16 rational approximation).
// Absolute error is far below 1e-9 across (1e-12, 1-1e-12), which is what
// both the randomization split and quantile rules need.
double inv_norm_cdf(double p);

}  // namespace honest
