#include "honest/confidence_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "honest/errors.hpp"
#include "honest/stats.hpp"

namespace honest {

CutoffPlan cutoff(const Ellipsoid& model, long n) {
    if (n < 1) throw std::invalid_argument("cutoff: n must be >= 1");
    if (model.finite_dim && model.beta < 0.25) {
        throw infeasible_cutoff_error("cutoff: finite model requires beta >= 1/4");
    }
    const double raw = std::pow(model.L, 4.0 / (4.0 * model.beta + 1.0)) *
                       std::pow(static_cast<double>(n), 1.0 / (2.0 * model.beta + 0.5));
    long k = std::max<long>(1, ceil_tol(raw));
    if (model.finite_dim) k = std::min(k, *model.finite_dim);
    return {k, model.L / std::pow(static_cast<double>(k), model.beta)};
}

CutoffPlan full_dimension_cutoff(long n) {
    if (n < 1) throw std::invalid_argument("full_dimension_cutoff: n must be >= 1");
    return {n, 0.0};
}

namespace {

bool radius_feasible(const NormEstimate& est, double z, double bias, double x) {
    const double tau = std::sqrt(std::max(est.a + est.b * x * x, 0.0));
    const double inner = std::max(z * tau + est.r, 0.0);
    return x <= std::sqrt(inner) + 2.0 * bias;
}

CutoffPlan resolve_plan(const std::optional<Ellipsoid>& model, long n,
                        const BallOptions& opts) {
    if (opts.plan_override) return *opts.plan_override;
    if (!model) {
        throw std::invalid_argument("build_ball: need a model or a plan override");
    }
    return cutoff(*model, n);
}

}  // namespace

double radius_envelope(const NormEstimate& est, double z, double bias) {
    const double Bp = std::sqrt(std::max(z * std::sqrt(est.a), 0.0) + std::max(est.r, 0.0)) +
                      2.0 * bias;
    const double A = std::sqrt(z) * std::pow(est.b, 0.25);
    return sq(0.5 * (A + std::sqrt(A * A + 4.0 * Bp)));
}

double solve_radius(const NormEstimate& est, double z, double bias, bool conservative_floor) {
    if (z < 0.0) throw std::invalid_argument("solve_radius: z must be >= 0");
    if (bias < 0.0) throw std::invalid_argument("solve_radius: bias must be >= 0");
    // x = 2 bias is always feasible (the right-hand side is at least that)
    // and any x above the envelope root is not, so bisection brackets the
    // largest solution; starting at the floor keeps radius >= 2 bias exact.
    double lo = 2.0 * bias;
    double hi = radius_envelope(est, z, bias) + 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (radius_feasible(est, z, bias, mid) ? lo : hi) = mid;
    }
    double x = lo;
    if (conservative_floor) {
        x = std::max(x, std::sqrt(std::max(z * std::sqrt(est.a), 0.0)));
    }
    return x;
}

namespace {

ConfidenceBall assemble(std::span<const double> theta_hat, std::optional<Ellipsoid> model,
                        const NormEstimate& est, double alpha, const QuantileRule& rule,
                        const CutoffPlan& plan, const BallOptions& opts, long n,
                        double sigma2_for_sim) {
    QuantileRule r = rule;
    r.alpha = alpha;
    double z;
    if (r.mode == QuantileRule::Mode::simulated) {
        // Plug-in reference: the finite-sample quantile is simulated at the
        // center itself.
        SimulationContext ctx;
        ctx.theta_ref.assign(theta_hat.begin(), theta_hat.end());
        ctx.theta_hat.assign(theta_hat.begin(), theta_hat.end());
        ctx.k = plan.k;
        ctx.n = n;
        ctx.sigma2 = sigma2_for_sim;
        ctx.dist = opts.errors.value_or(ErrorDistribution::standard_normal());
        z = quantile(r, &ctx);
    } else {
        z = quantile(r);
    }
    z = std::max(z, 0.0);

    ConfidenceBall ball;
    ball.center.assign(theta_hat.begin(), theta_hat.end());
    ball.k = plan.k;
    ball.bias = plan.bias;
    ball.z = z;
    ball.r_hat = est;
    ball.model = std::move(model);
    ball.floor_applied = opts.conservative_floor;
    ball.radius = solve_radius(est, z, plan.bias, opts.conservative_floor);
    return ball;
}

}  // namespace

ConfidenceBall build_ball(const SequenceSample& second, std::span<const double> theta_hat,
                          std::optional<Ellipsoid> model, double alpha, const QuantileRule& rule,
                          const SigmaSource& sigma, const BallOptions& opts) {
    const CutoffPlan plan = resolve_plan(model, second.n, opts);
    if (plan.k > second.K()) {
        throw std::invalid_argument("build_ball: cut-off exceeds the sample truncation");
    }

    double sigma2 = second.sigma2;
    if (sigma.kind == SigmaSource::Kind::known) {
        sigma2 = sigma.value;
    } else {
        // Caller picks (m, l); a window disjoint from 1..k keeps sigma-hat
        // independent of R_{k,n}.
        sigma2 = std::max(sigma_hat(second, sigma.m, sigma.l), 1e-12);
    }

    SequenceSample scaled = second;
    scaled.sigma2 = sigma2;
    NormEstimate est = r_kn(scaled, theta_hat, plan.k);
    if (opts.errors) {
        const NormEstimate comps =
            nonnormal_variance_components(*opts.errors, plan.k, second.n, sigma2);
        est.a = comps.a;
        est.b = comps.b;
        est.c = comps.c;
        est.c0 = comps.c0;
    }
    return assemble(theta_hat, std::move(model), est, alpha, rule, plan, opts, second.n, sigma2);
}

ConfidenceBall build_ball(const DensitySample& second, std::span<const double> theta_hat,
                          std::optional<Ellipsoid> model, double alpha, const QuantileRule& rule,
                          const BallOptions& opts) {
    if (rule.mode == QuantileRule::Mode::simulated) {
        throw std::invalid_argument("build_ball: simulated quantiles are sequence-model only");
    }
    const CutoffPlan plan = resolve_plan(model, second.n(), opts);
    const NormEstimate est = density_r_kn(second, theta_hat, plan.k);
    return assemble(theta_hat, std::move(model), est, alpha, rule, plan, opts, second.n(),
                    second.f_sup);
}

ConfidenceBall build_ball(const RegressionSample& second, std::span<const double> theta_hat,
                          std::optional<Ellipsoid> model, double alpha, const QuantileRule& rule,
                          const BallOptions& opts) {
    if (rule.mode == QuantileRule::Mode::simulated) {
        throw std::invalid_argument("build_ball: simulated quantiles are sequence-model only");
    }
    const CutoffPlan plan = resolve_plan(model, second.n(), opts);
    const NormEstimate est = regression_r_kn(second, theta_hat, plan.k);
    return assemble(theta_hat, std::move(model), est, alpha, rule, plan, opts, second.n(),
                    sq(second.f_sup) + second.sigma2_sup);
}

bool contains(const ConfidenceBall& ball, std::span<const double> theta) {
    if (ball.model && !ball.model->contains(theta)) return false;

    const std::size_t len = std::max(theta.size(), ball.center.size());
    NeumaierSum dist2, s2, s1;
    for (std::size_t i = 0; i < len; ++i) {
        const double t = (i < theta.size()) ? theta[i] : 0.0;
        const double c = (i < ball.center.size()) ? ball.center[i] : 0.0;
        const double d = t - c;
        dist2.add(d * d);
        if (i < static_cast<std::size_t>(ball.k)) {
            s2.add(d * d);
            s1.add(d);
        }
    }
    const double tau = tau_plugin(ball.r_hat, s2.value(), s1.value()).value;
    const double rhs =
        std::sqrt(std::max(ball.z * tau + ball.r_hat.r, 0.0)) + 2.0 * ball.bias;
    return std::sqrt(dist2.value()) <= rhs;
}

double diameter(const ConfidenceBall& ball) { return 2.0 * ball.radius; }

}  // namespace honest
