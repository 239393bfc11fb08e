#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "honest/rng.hpp"

namespace honest {

// Error family for the sequence observation noise: mean 0, variance 1,
// finite fourth moment. Carries the moments of eps^2 needed by the
// nonnormal variance formula.
struct ErrorDistribution {
    enum class Family { standard_normal, centered_exponential, scaled_uniform };

    Family family = Family::standard_normal;
    double var_eps2 = 2.0;      // Var(eps_1^2)
    double cov_eps2_eps = 0.0;  // Cov(eps_1^2, eps_1)

    static ErrorDistribution standard_normal();
    static ErrorDistribution centered_exponential();
    static ErrorDistribution scaled_uniform();

    // corr(eps^2, eps); the scale lower bound uses 1 - corr.
    double corr_bound() const;

    // Inverse-CDF draw, deterministic given the generator state.
    double draw(Rng& rng) const;

    const char* name() const;
};

// Finitely truncated observation (X_1,...,X_K) with X_i = theta_i +
// sqrt(sigma2/n) eps_i.
struct SequenceSample {
    std::vector<double> values;
    long n = 1;
    double sigma2 = 1.0;

    long K() const { return static_cast<long>(values.size()); }
    double noise_var() const { return sigma2 / static_cast<double>(n); }
};

// Two conditionally independent copies produced by the randomization
// device; each carries noise scale 2 sigma2 / n.
struct SplitPair {
    SequenceSample first;   // feeds the centering estimator
    SequenceSample second;  // feeds the distance estimate and the radius
};

SequenceSample sample_sequence(std::span<const double> theta, double sigma2, long n, long K,
                               std::uint64_t seed,
                               const ErrorDistribution& dist = ErrorDistribution::standard_normal());

// X'_i = X_i + Phi^-1(U_i) sigma/sqrt(n), X''_i = X_i - Phi^-1(U_i) sigma/sqrt(n).
SplitPair split_randomize(const SequenceSample& x, std::uint64_t seed);

// Same device with caller-supplied uniforms (test hook).
SplitPair split_with_uniforms(const SequenceSample& x, std::span<const double> uniforms);

// sigma^2 estimator (n/l) sum_{i=m+1}^{m+l} X_i^2 from a tail window.
double sigma_hat(const SequenceSample& x, long m, long l);

// Window (m, l) realizing l >> n^(1/(2 beta + 1/2)) via a log(n) factor.
// Caps l at finite_dim - m when the model is finite dimensional; throws
// infeasible_window_error when the cap leaves no room.
std::pair<long, long> select_window(double beta, long n,
                                    std::optional<long> finite_dim = std::nullopt);

}  // namespace honest
