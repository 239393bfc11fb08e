#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace honest {

// Neumaier compensated accumulator. The U-statistic kernels accumulate n*k
// products at desk scale; plain summation can lose 3-4 digits there.
class NeumaierSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    NeumaierSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty input");
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

// Unbiased sample variance.
inline double variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance: need >= 2 values");
    const double m = mean(xs);
    NeumaierSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(xs.size() - 1);
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty input");
    const std::size_t h = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + h, xs.end());
    if (xs.size() % 2 == 1) return xs[h];
    const double upper = xs[h];
    std::nth_element(xs.begin(), xs.begin() + h - 1, xs.begin() + h);
    return 0.5 * (xs[h - 1] + upper);
}

// Lower-tail empirical quantile: order statistic at 1-based index
// ceil(reps * p) of the ascending sort.
inline double empirical_quantile(std::vector<double> xs, double p) {
    if (xs.empty()) throw std::invalid_argument("empirical_quantile: empty input");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("empirical_quantile: p in (0,1)");
    const auto idx = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(xs.size())));
    const std::size_t i = std::max<std::size_t>(idx, 1) - 1;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(i), xs.end());
    return xs[i];
}

struct OlsFit {
    double slope;
    double intercept;
    double slope_se;
};

// Ordinary least squares of y on x.
inline OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("ols_fit: need matching inputs of size >= 2");
    }
    const auto n = static_cast<double>(x.size());
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_fit: degenerate x");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - intercept - slope * x[i];
        rss += r * r;
    }
    const double se = (x.size() > 2)
                          ? std::sqrt(rss / ((n - 2.0) * sxx))
                          : 0.0;
    return {slope, intercept, se};
}

// Kolmogorov-Smirnov distance between an empirical sample and a CDF.
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf&& cdf) {
    if (xs.empty()) throw std::invalid_argument("ks_distance: empty input");
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::fabs(static_cast<double>(i) / n - f));
    }
    return d;
}

// Ceiling with a relative tolerance so that expressions like 4096^(2/3)
// evaluate to the intended integer despite floating-point round-off.
inline long ceil_tol(double x) {
    return static_cast<long>(std::ceil(x - 1e-9 * std::max(1.0, std::fabs(x))));
}

inline double sq(double x) { return x * x; }

}  // namespace honest
