#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "honest/sequence_model.hpp"

namespace honest {

// Estimate of the truncated squared distance sum_{i<=k}(theta_i - hat_i)^2
// together with its variance decomposition tau^2(s2, s1) = a + b s2 + c s1.
struct NormEstimate {
    double r = 0.0;   // distance estimate; may be negative
    double a = 0.0;   // constant variance component
    double b = 0.0;   // coefficient of the residual energy s2
    double c = 0.0;   // coefficient of the signed residual sum s1 (0 for normal errors)
    double c0 = 0.0;  // corr(eps^2, eps) bound of the error family
    long k = 0;
    long n = 0;
};

struct TauValue {
    double value;
    bool clamped;  // set when an adversarial s1 forced the lower-bound clamp
};

// R_{k,n}: residual sum of squares over the first k coordinates minus the
// noise allowance k sigma^2 / n. Unbiased for the truncated squared distance.
NormEstimate r_kn(const SequenceSample& x, std::span<const double> theta_hat, long k);

// Variance components for a general error family with mean 0, variance 1,
// finite fourth moment: a = k sigma^4 var(eps^2)/n^2, b = 4 sigma^2/n,
// c = 4 sigma^3 cov(eps^2, eps)/n^(3/2).
NormEstimate nonnormal_variance_components(const ErrorDistribution& dist, long k, long n,
                                           double sigma2);

// sqrt(a + b s2 + c s1); a negative radicand (possible only with c != 0)
// clamps to the (1-c0)(a + b s2) lower bound and flags it.
TauValue tau_plugin(const NormEstimate& est, double s2, double s1 = 0.0);

// (R_{k,n} - s^2)/tau with s^2 and tau computed from the true theta
// (simulation diagnostics only).
double standardized_statistic(const SequenceSample& x, std::span<const double> theta,
                              std::span<const double> theta_hat, long k,
                              const ErrorDistribution& dist = ErrorDistribution::standard_normal());

// Quantile rules: Phi^-1(1-alpha), Chebyshev sqrt(1/alpha), or the
// simulated finite-sample quantile of the standardized statistic.
struct QuantileRule {
    enum class Mode { normal, chebyshev, simulated };
    Mode mode = Mode::normal;
    double alpha = 0.05;
    long sim_reps = 0;        // simulated mode: number of draws (>= 1000)
    std::uint64_t sim_seed = 0;
    bool two_sided = false;   // simulated mode: quantile of |S| instead of the lower tail

    static QuantileRule normal(double alpha) { return {Mode::normal, alpha, 0, 0, false}; }
    static QuantileRule chebyshev(double alpha) { return {Mode::chebyshev, alpha, 0, 0, false}; }
    static QuantileRule simulated(double alpha, long reps, std::uint64_t seed,
                                  bool two_sided = false) {
        return {Mode::simulated, alpha, reps, seed, two_sided};
    }
};

// Context for simulated quantiles: the statistic is drawn at a reference
// parameter with the centering estimator held fixed.
struct SimulationContext {
    std::vector<double> theta_ref;
    std::vector<double> theta_hat;
    long k = 0;
    long n = 0;
    double sigma2 = 1.0;
    ErrorDistribution dist = ErrorDistribution::standard_normal();
};

double quantile(const QuantileRule& rule, const SimulationContext* ctx = nullptr);

}  // namespace honest
