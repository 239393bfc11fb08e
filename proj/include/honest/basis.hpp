#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace honest {

// Trigonometric orthonormal basis of L2[0,1]:
//   e_1(x) = 1, e_{2j}(x) = sqrt(2) cos(2 pi j x), e_{2j+1}(x) = sqrt(2) sin(2 pi j x).
struct BasisSpec {
    long k_max = 1L << 20;
};

inline double basis_eval(const BasisSpec& spec, long i, double x) {
    if (i < 1 || i > spec.k_max) throw std::invalid_argument("basis_eval: index out of range");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("basis_eval: x outside [0,1]");
    if (i == 1) return 1.0;
    const double j = static_cast<double>(i / 2);
    const double arg = 2.0 * std::numbers::pi * j * x;
    constexpr double sqrt2 = 1.4142135623730951;
    return (i % 2 == 0) ? sqrt2 * std::cos(arg) : sqrt2 * std::sin(arg);
}

inline double basis_eval(long i, double x) { return basis_eval(BasisSpec{}, i, x); }

}  // namespace honest
