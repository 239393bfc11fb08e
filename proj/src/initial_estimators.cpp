#include "honest/initial_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "honest/stats.hpp"

namespace honest {

CenterEstimate projection_estimator(const SequenceSample& first, long k) {
    if (k < 1 || k > first.K()) {
        throw std::invalid_argument("projection_estimator: k out of range");
    }
    CenterEstimate est;
    est.k_used = k;
    est.theta_hat.assign(first.values.begin(), first.values.begin() + k);
    est.theta_hat.resize(first.values.size(), 0.0);
    return est;
}

CenterEstimate adaptive_estimator(const SequenceSample& first, std::span<const long> k_grid,
                                  std::optional<double> sigma2_override) {
    if (k_grid.empty()) throw std::invalid_argument("adaptive_estimator: empty grid");
    const long K = first.K();
    for (long k : k_grid) {
        if (k < 1 || k > K) throw std::invalid_argument("adaptive_estimator: grid entry out of range");
    }
    const double sigma2 = sigma2_override.value_or(first.sigma2);
    const double v = sigma2 / static_cast<double>(first.n);

    // suffix[k] = sum_{i>k} (X_i^2 - v), so URE(k) = k v + suffix[k].
    std::vector<double> suffix(static_cast<std::size_t>(K) + 1, 0.0);
    for (long i = K - 1; i >= 0; --i) {
        const double x = first.values[static_cast<std::size_t>(i)];
        suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] + (x * x - v);
    }
    long best_k = 0;
    double best_ure = 0.0;
    for (long k : k_grid) {
        const double ure = static_cast<double>(k) * v + suffix[static_cast<std::size_t>(k)];
        if (best_k == 0 || ure < best_ure || (ure == best_ure && k < best_k)) {
            best_k = k;
            best_ure = ure;
        }
    }
    return projection_estimator(first, best_k);
}

std::vector<double> project_to_ellipsoid(std::span<const double> theta_hat,
                                         const Ellipsoid& model) {
    std::vector<double> out(theta_hat.begin(), theta_hat.end());
    if (model.finite_dim) {
        for (std::size_t i = static_cast<std::size_t>(*model.finite_dim); i < out.size(); ++i) {
            out[i] = 0.0;
        }
    }
    std::vector<double> w(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        w[i] = std::pow(static_cast<double>(i + 1), 2.0 * model.beta);
    }
    const double L2 = model.L * model.L;
    const auto constraint = [&](double lambda) {
        NeumaierSum s;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double t = out[i] / (1.0 + lambda * w[i]);
            s.add(t * t * w[i]);
        }
        return s.value();
    };
    if (constraint(0.0) <= L2) return out;

    double lo = 0.0, hi = 1.0;
    while (constraint(hi) > L2) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (constraint(mid) > L2 ? lo : hi) = mid;
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= (1.0 + hi * w[i]);
    return out;
}

bool center_regularity_diagnostic(std::span<const double> theta_hat, std::span<const double> theta,
                             long k, double eps) {
    if (k < 1) throw std::invalid_argument("center_regularity_diagnostic: k must be >= 1");
    if (eps < 0.0) throw std::invalid_argument("center_regularity_diagnostic: eps must be >= 0");
    double maxsq = 0.0;
    NeumaierSum sum;
    for (long i = 0; i < k; ++i) {
        const double hi = (static_cast<std::size_t>(i) < theta_hat.size()) ? theta_hat[i] : 0.0;
        const double ti = (static_cast<std::size_t>(i) < theta.size()) ? theta[i] : 0.0;
        const double d2 = sq(hi - ti);
        maxsq = std::max(maxsq, d2);
        sum.add(d2);
    }
    return maxsq <= eps * sum.value();
}

}  // namespace honest
