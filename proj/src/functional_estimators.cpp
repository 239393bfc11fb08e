#include "honest/functional_estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "honest/basis.hpp"
#include "honest/normal.hpp"
#include "honest/stats.hpp"

namespace honest {

namespace {

double coord(std::span<const double> v, long i) {
    return (static_cast<std::size_t>(i) < v.size()) ? v[static_cast<std::size_t>(i)] : 0.0;
}

// Shared O(nk) core: per index i, accumulate S1 = sum_r a_ir and
// S2 = sum_r a_ir^2 with compensated sums, contribute S1^2 - S2.
template <class Term>
double ustat_fast(long n, long k, Term term) {
    std::vector<double> contrib(static_cast<std::size_t>(k));
#pragma omp parallel for schedule(static)
    for (long i = 0; i < k; ++i) {
        NeumaierSum s1, s2;
        for (long r = 0; r < n; ++r) {
            const double a = term(i, r);
            s1.add(a);
            s2.add(a * a);
        }
        const double t1 = s1.value();
        contrib[static_cast<std::size_t>(i)] = t1 * t1 - s2.value();
    }
    NeumaierSum total;
    for (long i = 0; i < k; ++i) total.add(contrib[static_cast<std::size_t>(i)]);
    return total.value() / (static_cast<double>(n) * static_cast<double>(n - 1));
}

template <class Term>
double ustat_naive(long n, long k, Term term) {
    NeumaierSum total;
    for (long r = 0; r < n; ++r) {
        for (long s = 0; s < n; ++s) {
            if (r == s) continue;
            NeumaierSum kernel;
            for (long i = 0; i < k; ++i) kernel.add(term(i, r) * term(i, s));
            total.add(kernel.value());
        }
    }
    return total.value() / (static_cast<double>(n) * static_cast<double>(n - 1));
}

void check_inputs(long n, long k) {
    if (n < 2) throw std::invalid_argument("u-statistic: need n >= 2");
    if (k < 1) throw std::invalid_argument("u-statistic: need k >= 1");
}

}  // namespace

NormEstimate density_r_kn(const DensitySample& data, std::span<const double> theta_hat,
                          long k) {
    const long n = data.n();
    check_inputs(n, k);
    const auto term = [&](long i, long r) {
        return basis_eval(i + 1, data.points[static_cast<std::size_t>(r)]) -
               coord(theta_hat, i);
    };
    NormEstimate est;
    est.r = ustat_fast(n, k, term);
    est.a = 2.0 * static_cast<double>(k) * sq(data.f_sup) /
            (static_cast<double>(n) * static_cast<double>(n - 1));
    est.b = 4.0 * data.f_sup / static_cast<double>(n);
    est.c = 0.0;
    est.c0 = 0.0;
    est.k = k;
    est.n = n;
    return est;
}

double density_r_kn_naive(const DensitySample& data, std::span<const double> theta_hat,
                          long k) {
    const long n = data.n();
    check_inputs(n, k);
    return ustat_naive(n, k, [&](long i, long r) {
        return basis_eval(i + 1, data.points[static_cast<std::size_t>(r)]) -
               coord(theta_hat, i);
    });
}

NormEstimate regression_r_kn(const RegressionSample& data, std::span<const double> theta_hat,
                             long k) {
    const long n = data.n();
    check_inputs(n, k);
    const auto term = [&](long i, long r) {
        const auto idx = static_cast<std::size_t>(r);
        return data.y[idx] * basis_eval(i + 1, data.x[idx]) - coord(theta_hat, i);
    };
    const double bound = sq(data.f_sup) + data.sigma2_sup;
    NormEstimate est;
    est.r = ustat_fast(n, k, term);
    est.a = 2.0 * static_cast<double>(k) * sq(bound) /
            (static_cast<double>(n) * static_cast<double>(n - 1));
    est.b = 4.0 * bound / static_cast<double>(n);
    est.c = 0.0;
    est.c0 = 0.0;
    est.k = k;
    est.n = n;
    return est;
}

double regression_r_kn_naive(const RegressionSample& data, std::span<const double> theta_hat,
                             long k) {
    const long n = data.n();
    check_inputs(n, k);
    return ustat_naive(n, k, [&](long i, long r) {
        const auto idx = static_cast<std::size_t>(r);
        return data.y[idx] * basis_eval(i + 1, data.x[idx]) - coord(theta_hat, i);
    });
}

HoeffdingParts hoeffding_parts(const DensitySample& data, std::span<const double> theta,
                               std::span<const double> theta_hat, long k) {
    const long n = data.n();
    check_inputs(n, k);
    // Linear part: (2/n) sum_r sum_i (theta_i - hat_i)(e_i(X_r) - theta_i).
    NeumaierSum lin;
    for (long r = 0; r < n; ++r) {
        for (long i = 0; i < k; ++i) {
            const double d = coord(theta, i) - coord(theta_hat, i);
            lin.add(d * (basis_eval(i + 1, data.points[static_cast<std::size_t>(r)]) -
                         coord(theta, i)));
        }
    }
    // Degenerate part: same pairwise identity with a_ir = e_i(X_r) - theta_i.
    const double deg = ustat_fast(n, k, [&](long i, long r) {
        return basis_eval(i + 1, data.points[static_cast<std::size_t>(r)]) - coord(theta, i);
    });
    return {2.0 * lin.value() / static_cast<double>(n), deg};
}

std::vector<double> empirical_coeffs(const DensitySample& data, long k) {
    if (k < 1) throw std::invalid_argument("empirical_coeffs: k must be >= 1");
    const long n = data.n();
    if (n < 1) throw std::invalid_argument("empirical_coeffs: empty sample");
    std::vector<double> out(static_cast<std::size_t>(k));
#pragma omp parallel for schedule(static)
    for (long i = 0; i < k; ++i) {
        NeumaierSum s;
        for (long r = 0; r < n; ++r) {
            s.add(basis_eval(i + 1, data.points[static_cast<std::size_t>(r)]));
        }
        out[static_cast<std::size_t>(i)] = s.value() / static_cast<double>(n);
    }
    return out;
}

std::vector<double> empirical_coeffs(const RegressionSample& data, long k) {
    if (k < 1) throw std::invalid_argument("empirical_coeffs: k must be >= 1");
    const long n = data.n();
    if (n < 1) throw std::invalid_argument("empirical_coeffs: empty sample");
    std::vector<double> out(static_cast<std::size_t>(k));
#pragma omp parallel for schedule(static)
    for (long i = 0; i < k; ++i) {
        NeumaierSum s;
        for (long r = 0; r < n; ++r) {
            const auto idx = static_cast<std::size_t>(r);
            s.add(data.y[idx] * basis_eval(i + 1, data.x[idx]));
        }
        out[static_cast<std::size_t>(i)] = s.value() / static_cast<double>(n);
    }
    return out;
}

DensitySample sample_density(const FunctionSpec& f, long n, std::uint64_t seed) {
    if (!f.is_density) throw std::invalid_argument("sample_density: spec is not a density");
    if (n < 2) throw std::invalid_argument("sample_density: n must be >= 2");
    const double sup = f.sup_bound();
    if (sup > 100.0) {
        throw std::invalid_argument("sample_density: rejection efficiency below 1%");
    }
    Rng rng(mix_seed(seed, stream::points));
    DensitySample out;
    out.f_sup = sup;
    out.points.reserve(static_cast<std::size_t>(n));
    while (out.points.size() < static_cast<std::size_t>(n)) {
        const double x = rng.uniform();
        const double u = rng.uniform();
        if (u * sup <= f.eval(x)) out.points.push_back(x);
    }
    return out;
}

RegressionSample sample_regression(const FunctionSpec& f, const NoiseSpec& noise, long n,
                                   std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sample_regression: n must be >= 2");
    if (noise.var0 < 0.0 || noise.sigma2_at(0.0) < 0.0 || noise.sigma2_at(1.0) < 0.0) {
        throw std::invalid_argument("sample_regression: sigma^2(x) must be >= 0 on [0,1]");
    }
    Rng rng(mix_seed(seed, stream::points));
    RegressionSample out;
    out.f_sup = f.sup_bound();
    out.sigma2_sup = noise.sigma2_sup();
    out.x.resize(static_cast<std::size_t>(n));
    out.y.resize(static_cast<std::size_t>(n));
    for (long r = 0; r < n; ++r) {
        const double x = rng.uniform();
        const double u = rng.uniform();
        double eps0;
        switch (noise.family) {
            case NoiseSpec::Family::normal: eps0 = inv_norm_cdf(u); break;
            case NoiseSpec::Family::centered_exponential: eps0 = -std::log1p(-u) - 1.0; break;
            case NoiseSpec::Family::scaled_uniform: eps0 = 3.4641016151377544 * (u - 0.5); break;
            default: throw std::logic_error("sample_regression: unknown noise family");
        }
        const auto idx = static_cast<std::size_t>(r);
        out.x[idx] = x;
        out.y[idx] = f.eval(x) + std::sqrt(noise.sigma2_at(x)) * eps0;
    }
    return out;
}

}  // namespace honest
