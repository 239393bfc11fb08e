#include "honest/function_catalog.hpp"

#include <cmath>
#include <stdexcept>

#include "honest/basis.hpp"

namespace honest {

double FunctionSpec::eval(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0.0) s += coeffs[i] * basis_eval(static_cast<long>(i + 1), x);
    }
    return s;
}

double FunctionSpec::sup_bound() const {
    if (coeffs.empty()) return 0.0;
    double s = std::fabs(coeffs[0]);
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
        s += 1.4142135623730951 * std::fabs(coeffs[i]);
    }
    return s;
}

FunctionSpec FunctionSpec::uniform_density() { return density({1.0}); }

FunctionSpec FunctionSpec::cosine_density(double c, long j) {
    if (j < 1) throw std::invalid_argument("cosine_density: j must be >= 1");
    std::vector<double> coeffs(static_cast<std::size_t>(2 * j + 1), 0.0);
    coeffs[0] = 1.0;
    coeffs[static_cast<std::size_t>(2 * j - 1)] = c;
    return density(std::move(coeffs));
}

FunctionSpec FunctionSpec::density(std::vector<double> coeffs) {
    if (coeffs.empty() || coeffs[0] != 1.0) {
        throw std::invalid_argument("density: first coefficient must be 1");
    }
    double pert = 0.0;
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
        pert += 1.4142135623730951 * std::fabs(coeffs[i]);
    }
    if (pert >= 1.0) {
        throw std::invalid_argument("density: perturbation makes the density non-positive");
    }
    FunctionSpec f;
    f.coeffs = std::move(coeffs);
    f.is_density = true;
    return f;
}

FunctionSpec FunctionSpec::regression_target(std::vector<double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("regression_target: empty coefficients");
    FunctionSpec f;
    f.coeffs = std::move(coeffs);
    f.is_density = false;
    return f;
}

std::vector<double> true_coeffs(const FunctionSpec& f, long k) {
    if (k < 1) throw std::invalid_argument("true_coeffs: k must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(k), 0.0);
    const std::size_t m = std::min(out.size(), f.coeffs.size());
    for (std::size_t i = 0; i < m; ++i) out[i] = f.coeffs[i];
    return out;
}

}  // namespace honest
