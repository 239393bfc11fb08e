#include "honest/norm_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "honest/normal.hpp"
#include "honest/stats.hpp"

namespace honest {

namespace {
double coord(std::span<const double> v, long i) {
    return (static_cast<std::size_t>(i) < v.size()) ? v[static_cast<std::size_t>(i)] : 0.0;
}
}  // namespace

NormEstimate r_kn(const SequenceSample& x, std::span<const double> theta_hat, long k) {
    if (k < 1) throw std::invalid_argument("r_kn: k must be >= 1");
    if (k > x.K()) throw std::invalid_argument("r_kn: k exceeds sample length");
    const double v = x.noise_var();
    NeumaierSum rss;
    for (long i = 0; i < k; ++i) {
        const double d = x.values[static_cast<std::size_t>(i)] - coord(theta_hat, i);
        rss.add(d * d);
    }
    NormEstimate est;
    est.r = rss.value() - static_cast<double>(k) * v;
    est.a = 2.0 * static_cast<double>(k) * sq(x.sigma2) /
            sq(static_cast<double>(x.n));
    est.b = 4.0 * x.sigma2 / static_cast<double>(x.n);
    est.c = 0.0;
    est.c0 = 0.0;
    est.k = k;
    est.n = x.n;
    return est;
}

NormEstimate nonnormal_variance_components(const ErrorDistribution& dist, long k, long n,
                                           double sigma2) {
    if (k < 1) throw std::invalid_argument("nonnormal_variance_components: k must be >= 1");
    if (n < 1) throw std::invalid_argument("nonnormal_variance_components: n must be >= 1");
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("nonnormal_variance_components: sigma2 must be > 0");
    }
    if (!(dist.var_eps2 > 0.0)) {
        throw std::invalid_argument("nonnormal_variance_components: missing fourth moment");
    }
    const double nn = static_cast<double>(n);
    NormEstimate est;
    est.a = static_cast<double>(k) * sq(sigma2) * dist.var_eps2 / sq(nn);
    est.b = 4.0 * sigma2 / nn;
    est.c = 4.0 * sigma2 * std::sqrt(sigma2) * dist.cov_eps2_eps / (nn * std::sqrt(nn));
    est.c0 = dist.corr_bound();
    est.k = k;
    est.n = n;
    return est;
}

TauValue tau_plugin(const NormEstimate& est, double s2, double s1) {
    if (s2 < 0.0) throw std::invalid_argument("tau_plugin: s2 must be >= 0");
    const double radicand = est.a + est.b * s2 + est.c * s1;
    const double floor = (1.0 - est.c0) * (est.a + est.b * s2);
    if (radicand < floor) {
        return {std::sqrt(std::max(floor, 0.0)), true};
    }
    return {std::sqrt(radicand), false};
}

double standardized_statistic(const SequenceSample& x, std::span<const double> theta,
                              std::span<const double> theta_hat, long k,
                              const ErrorDistribution& dist) {
    NormEstimate est = r_kn(x, theta_hat, k);
    const NormEstimate comps = nonnormal_variance_components(dist, k, x.n, x.sigma2);
    est.a = comps.a;
    est.b = comps.b;
    est.c = comps.c;
    est.c0 = comps.c0;
    NeumaierSum s2, s1;
    for (long i = 0; i < k; ++i) {
        const double d = coord(theta, i) - coord(theta_hat, i);
        s2.add(d * d);
        s1.add(d);
    }
    const double tau = tau_plugin(est, s2.value(), s1.value()).value;
    return (est.r - s2.value()) / tau;
}

namespace {
double simulated_quantile(const QuantileRule& rule, const SimulationContext& ctx) {
    if (rule.sim_reps < 1000) {
        throw std::invalid_argument("quantile: simulated mode needs reps >= 1000");
    }
    if (ctx.k < 1 || ctx.n < 1 || !(ctx.sigma2 > 0.0)) {
        throw std::invalid_argument("quantile: invalid simulation context");
    }
    const NormEstimate comps =
        nonnormal_variance_components(ctx.dist, ctx.k, ctx.n, ctx.sigma2);
    NeumaierSum s2acc, s1acc;
    std::vector<double> d(static_cast<std::size_t>(ctx.k));
    for (long i = 0; i < ctx.k; ++i) {
        d[static_cast<std::size_t>(i)] = coord(ctx.theta_ref, i) - coord(ctx.theta_hat, i);
        s2acc.add(sq(d[static_cast<std::size_t>(i)]));
        s1acc.add(d[static_cast<std::size_t>(i)]);
    }
    const double tau = tau_plugin(comps, s2acc.value(), s1acc.value()).value;
    const double vn = ctx.sigma2 / static_cast<double>(ctx.n);
    const double sn = std::sqrt(vn);

    Rng rng(mix_seed(rule.sim_seed, stream::quantile));
    std::vector<double> stats(static_cast<std::size_t>(rule.sim_reps));
    for (long rep = 0; rep < rule.sim_reps; ++rep) {
        NeumaierSum acc;
        for (long i = 0; i < ctx.k; ++i) {
            const double e = ctx.dist.draw(rng);
            acc.add((e * e - 1.0) * vn + 2.0 * sn * d[static_cast<std::size_t>(i)] * e);
        }
        stats[static_cast<std::size_t>(rep)] = acc.value() / tau;
    }
    if (rule.two_sided) {
        for (double& s : stats) s = std::fabs(s);
        return empirical_quantile(std::move(stats), 1.0 - rule.alpha);
    }
    // Lower-tail convention: z with P(S <= -z) ~ alpha.
    return -empirical_quantile(std::move(stats), rule.alpha);
}
}  // namespace

double quantile(const QuantileRule& rule, const SimulationContext* ctx) {
    if (!(rule.alpha > 0.0 && rule.alpha < 1.0)) {
        throw std::invalid_argument("quantile: alpha must lie in (0,1)");
    }
    switch (rule.mode) {
        case QuantileRule::Mode::normal:
            return inv_norm_cdf(1.0 - rule.alpha);
        case QuantileRule::Mode::chebyshev:
            return std::sqrt(1.0 / rule.alpha);
        case QuantileRule::Mode::simulated:
            if (ctx == nullptr) {
                throw std::invalid_argument("quantile: simulated mode needs a context");
            }
            return simulated_quantile(rule, *ctx);
    }
    throw std::logic_error("quantile: unknown mode");
}

}  // namespace honest
