#pragma once

#include <span>
#include <string>
#include <vector>

namespace honest {

// Finite trigonometric sums f = sum_i coeffs[i-1] e_i. Densities require
// coeffs[0] = 1 and sqrt(2) * sum_{i>=2} |c_i| < 1 so f stays positive;
// true Fourier coefficients are then exact by orthonormality, which keeps
// quadrature error out of every oracle.
struct FunctionSpec {
    std::vector<double> coeffs;
    bool is_density = false;

    double eval(double x) const;

    // Upper bound on ||f||_inf: |c_1| + sqrt(2) sum_{i>=2} |c_i|.
    double sup_bound() const;

    static FunctionSpec uniform_density();
    // 1 + c * e_{2j} (cosine bump), |c| sqrt(2) < 1.
    static FunctionSpec cosine_density(double c, long j = 1);
    static FunctionSpec density(std::vector<double> coeffs);
    static FunctionSpec regression_target(std::vector<double> coeffs);
};

// Exact Fourier coefficients, zero-padded/truncated to length k.
std::vector<double> true_coeffs(const FunctionSpec& f, long k);

// Regression noise: eps = sigma(x) * eps0 with E(eps0)=0, Var(eps0)=1 and
// sigma^2(x) = var0 + var_slope * x on [0,1].
struct NoiseSpec {
    enum class Family { normal, centered_exponential, scaled_uniform };
    Family family = Family::normal;
    double var0 = 1.0;
    double var_slope = 0.0;

    double sigma2_at(double x) const { return var0 + var_slope * x; }
    double sigma2_sup() const { return var0 + (var_slope > 0.0 ? var_slope : 0.0); }
};

}  // namespace honest
