#include "honest/duality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "honest/stats.hpp"

namespace honest {

double l2_distance(std::span<const double> a, std::span<const double> b) {
    const std::size_t len = std::max(a.size(), b.size());
    NeumaierSum s;
    for (std::size_t i = 0; i < len; ++i) {
        const double x = (i < a.size()) ? a[i] : 0.0;
        const double y = (i < b.size()) ? b[i] : 0.0;
        s.add(sq(x - y));
    }
    return std::sqrt(s.value());
}

int confset_to_test(const ConfidenceBall& ball, const TestProblem& problem) {
    if (!(problem.eps > 0.0)) throw std::invalid_argument("confset_to_test: eps must be > 0");
    const double d = l2_distance(ball.center, problem.theta1);
    return (d + ball.radius < problem.eps) ? 1 : 0;
}

std::span<const double> confset_to_estimator(const ConfidenceBall& ball) {
    return ball.center;
}

double testing_floor_rate(double beta, double beta1, long n) {
    if (beta < 0.0 || beta1 < 0.0) {
        throw std::invalid_argument("testing_floor_rate: exponents must be >= 0");
    }
    if (n < 1) throw std::invalid_argument("testing_floor_rate: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double est = std::pow(nn, -beta1 / (2.0 * beta1 + 1.0));
    const double test = std::pow(nn, -beta / (2.0 * beta + 0.5));
    return std::max(est, test);
}

}  // namespace honest
