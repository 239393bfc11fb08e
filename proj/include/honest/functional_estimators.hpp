#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "honest/function_catalog.hpp"
#include "honest/norm_estimation.hpp"

namespace honest {

// i.i.d. draws from a density on [0,1] with a known sup bound.
struct DensitySample {
    std::vector<double> points;
    double f_sup = 1.0;

    long n() const { return static_cast<long>(points.size()); }
};

// i.i.d. regression pairs (X, Y) with X uniform on [0,1] and known bounds
// on ||f||_inf and ||sigma^2||_inf.
struct RegressionSample {
    std::vector<double> x;
    std::vector<double> y;
    double f_sup = 1.0;
    double sigma2_sup = 1.0;

    long n() const { return static_cast<long>(x.size()); }
};

// Order-2 U-statistic for sum_{i<=k}(theta_i - hat_i)^2 in the density
// model, evaluated by the O(nk) identity
//   sum_{r != s} a_ir a_is = (sum_r a_ir)^2 - sum_r a_ir^2,
// with a_ir = e_i(X_r) - hat_i. Per-index accumulations run in parallel;
// the final reduction over i is in index order, so results are
// deterministic for any thread count.
NormEstimate density_r_kn(const DensitySample& data, std::span<const double> theta_hat, long k);

// Serial O(n^2 k) double-sum reference; kept for equivalence tests and the
// kernel benchmark.
double density_r_kn_naive(const DensitySample& data, std::span<const double> theta_hat, long k);

// Same estimator in the random-design regression model with
// a_ir = Y_r e_i(X_r) - hat_i.
NormEstimate regression_r_kn(const RegressionSample& data, std::span<const double> theta_hat,
                             long k);

double regression_r_kn_naive(const RegressionSample& data, std::span<const double> theta_hat,
                             long k);

// Linear and degenerate parts of the Hoeffding decomposition, computed
// from the true coefficients (simulation diagnostics).
struct HoeffdingParts {
    double linear;      // (1/n) sum_r P_1 h(X_r)
    double degenerate;  // (1/(n(n-1))) sum_{r != s} P_12 h(X_r, X_s)
};
HoeffdingParts hoeffding_parts(const DensitySample& data, std::span<const double> theta,
                               std::span<const double> theta_hat, long k);

// Empirical Fourier coefficients (1/n) sum_j e_i(X_j), resp.
// (1/n) sum_j Y_j e_i(X_j).
std::vector<double> empirical_coeffs(const DensitySample& data, long k);
std::vector<double> empirical_coeffs(const RegressionSample& data, long k);

// Rejection sampler against the uniform envelope; the acceptance rate is
// 1/f_sup, so sup bounds above 100 are rejected as malformed.
DensitySample sample_density(const FunctionSpec& f, long n, std::uint64_t seed);

RegressionSample sample_regression(const FunctionSpec& f, const NoiseSpec& noise, long n,
                                   std::uint64_t seed);

}  // namespace honest
