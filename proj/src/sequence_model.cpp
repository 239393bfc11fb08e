#include "honest/sequence_model.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "honest/errors.hpp"
#include "honest/normal.hpp"
#include "honest/stats.hpp"

namespace honest {

ErrorDistribution ErrorDistribution::standard_normal() {
    return {Family::standard_normal, 2.0, 0.0};
}

// eps = E - 1 for E ~ Exp(1): central moments mu_3 = 2, mu_4 = 9, so
// Var(eps^2) = 9 - 1 = 8 and Cov(eps^2, eps) = mu_3 = 2.
ErrorDistribution ErrorDistribution::centered_exponential() {
    return {Family::centered_exponential, 8.0, 2.0};
}

// eps = sqrt(12)(U - 1/2): E eps^4 = 9/5, so Var(eps^2) = 4/5; odd moments vanish.
ErrorDistribution ErrorDistribution::scaled_uniform() {
    return {Family::scaled_uniform, 0.8, 0.0};
}

double ErrorDistribution::corr_bound() const {
    return cov_eps2_eps / std::sqrt(var_eps2);
}

double ErrorDistribution::draw(Rng& rng) const {
    const double u = rng.uniform();
    switch (family) {
        case Family::standard_normal:
            return inv_norm_cdf(u);
        case Family::centered_exponential:
            return -std::log1p(-u) - 1.0;
        case Family::scaled_uniform:
            return 3.4641016151377544 * (u - 0.5);  // sqrt(12)
    }
    throw std::logic_error("ErrorDistribution::draw: unknown family");
}

const char* ErrorDistribution::name() const {
    switch (family) {
        case Family::standard_normal: return "normal";
        case Family::centered_exponential: return "exponential";
        case Family::scaled_uniform: return "uniform";
    }
    return "?";
}

SequenceSample sample_sequence(std::span<const double> theta, double sigma2, long n, long K,
                               std::uint64_t seed, const ErrorDistribution& dist) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sample_sequence: sigma2 must be > 0");
    if (n < 1) throw std::invalid_argument("sample_sequence: n must be >= 1");
    if (K < 1) throw std::invalid_argument("sample_sequence: K must be >= 1");
    Rng rng(mix_seed(seed, stream::noise));
    const double s = std::sqrt(sigma2 / static_cast<double>(n));
    SequenceSample out;
    out.n = n;
    out.sigma2 = sigma2;
    out.values.resize(static_cast<std::size_t>(K));
    for (long i = 0; i < K; ++i) {
        const double t = (static_cast<std::size_t>(i) < theta.size()) ? theta[i] : 0.0;
        out.values[static_cast<std::size_t>(i)] = t + s * dist.draw(rng);
    }
    return out;
}

namespace {
SplitPair split_impl(const SequenceSample& x, auto next_uniform) {
    const double s = std::sqrt(x.noise_var());
    SplitPair pair;
    pair.first.n = pair.second.n = x.n;
    pair.first.sigma2 = pair.second.sigma2 = 2.0 * x.sigma2;
    pair.first.values.resize(x.values.size());
    pair.second.values.resize(x.values.size());
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        const double g = inv_norm_cdf(next_uniform());
        const double lo = x.values[i] + g * s;
        pair.first.values[i] = lo;
        // Complement against 2 X_i so the halves reconstruct the source.
        pair.second.values[i] = 2.0 * x.values[i] - lo;
    }
    return pair;
}
}  // namespace

SplitPair split_randomize(const SequenceSample& x, std::uint64_t seed) {
    Rng rng(mix_seed(seed, stream::split));
    return split_impl(x, [&rng] { return rng.uniform(); });
}

SplitPair split_with_uniforms(const SequenceSample& x, std::span<const double> uniforms) {
    if (uniforms.size() != x.values.size()) {
        throw std::invalid_argument("split_with_uniforms: need one uniform per coordinate");
    }
    std::size_t i = 0;
    return split_impl(x, [&uniforms, &i] { return uniforms[i++]; });
}

double sigma_hat(const SequenceSample& x, long m, long l) {
    if (m < 0 || l < 1) throw std::invalid_argument("sigma_hat: need m >= 0, l >= 1");
    if (m + l > x.K()) throw std::invalid_argument("sigma_hat: window exceeds K");
    NeumaierSum s;
    for (long i = m; i < m + l; ++i) {
        const double v = x.values[static_cast<std::size_t>(i)];
        s.add(v * v);
    }
    return static_cast<double>(x.n) / static_cast<double>(l) * s.value();
}

std::pair<long, long> select_window(double beta, long n, std::optional<long> finite_dim) {
    if (!(beta > 0.0)) throw std::invalid_argument("select_window: beta must be > 0");
    if (n < 2) throw std::invalid_argument("select_window: n must be >= 2");
    const double rate = std::pow(static_cast<double>(n), 1.0 / (2.0 * beta + 0.5));
    const long m = std::max<long>(1, ceil_tol(rate));
    long l = std::max<long>(1, ceil_tol(rate * std::log(static_cast<double>(n))));
    if (finite_dim) {
        l = std::min(l, *finite_dim - m);
        if (l <= 0) {
            throw infeasible_window_error(
                "select_window: window does not fit below the model dimension");
        }
    }
    return {m, l};
}

}  // namespace honest
