#pragma once

#include <optional>
#include <span>
#include <vector>

#include "honest/ellipsoid.hpp"
#include "honest/functional_estimators.hpp"
#include "honest/norm_estimation.hpp"
#include "honest/sequence_model.hpp"

namespace honest {

// Cut-off level with its worst-case tail bias over the supermodel.
struct CutoffPlan {
    long k = 1;
    double bias = 0.0;  // B_k = L / k^beta; 0 in the full-dimension model
};

// k = max(1, ceil(L^(4/(4 beta + 1)) n^(1/(2 beta + 1/2)))), capped at the
// finite dimension; requires beta >= 1/4 in the finite model.
CutoffPlan cutoff(const Ellipsoid& model, long n);

// Full-dimension plan (Theta = R^n): k = n, no bias.
CutoffPlan full_dimension_cutoff(long n);

// Honest confidence ball around a centering estimator. `model` absent means
// the unconstrained finite model R^n: membership then checks only the
// distance condition.
struct ConfidenceBall {
    std::vector<double> center;
    double radius = 0.0;
    long k = 1;
    double bias = 0.0;
    double z = 0.0;
    NormEstimate r_hat;
    std::optional<Ellipsoid> model;
    bool floor_applied = false;

    bool empty_interior() const { return radius == 0.0; }
};

// Largest x >= 0 with x <= sqrt(max(z * sqrt(a + b x^2) + r, 0)) + 2 B_k,
// by bisection to 1e-10 under the closed-form quadratic-root envelope.
// With `conservative_floor`, the result is floored at sqrt(z * tau(0)).
double solve_radius(const NormEstimate& est, double z, double bias,
                    bool conservative_floor = false);

// The closed-form envelope ((A + sqrt(A^2 + 4 B'))/2)^2 used as the
// bisection bracket; exposed for the ordering property tests.
double radius_envelope(const NormEstimate& est, double z, double bias);

// Noise-scale source for the sequence-model ball.
struct SigmaSource {
    enum class Kind { known, estimated };
    Kind kind = Kind::known;
    double value = 1.0;  // known noise scale (the sample's sigma2)
    long m = 0, l = 0;   // estimation window

    static SigmaSource known(double sigma2) { return {Kind::known, sigma2, 0, 0}; }
    static SigmaSource estimated(long m, long l) { return {Kind::estimated, 0.0, m, l}; }
};

struct BallOptions {
    bool conservative_floor = false;
    std::optional<CutoffPlan> plan_override;  // e.g. full_dimension_cutoff
    std::optional<ErrorDistribution> errors;  // nonnormal variance components
};

// The caller contract: theta_hat must come from data independent of
// `second` (the split device or sample splitting provides this).
ConfidenceBall build_ball(const SequenceSample& second, std::span<const double> theta_hat,
                          std::optional<Ellipsoid> model, double alpha, const QuantileRule& rule,
                          const SigmaSource& sigma, const BallOptions& opts = {});

ConfidenceBall build_ball(const DensitySample& second, std::span<const double> theta_hat,
                          std::optional<Ellipsoid> model, double alpha, const QuantileRule& rule,
                          const BallOptions& opts = {});

ConfidenceBall build_ball(const RegressionSample& second, std::span<const double> theta_hat,
                          std::optional<Ellipsoid> model, double alpha, const QuantileRule& rule,
                          const BallOptions& opts = {});

// Exact theta-dependent membership: the distance condition at tau(s2, s1)
// together with supermodel membership.
bool contains(const ConfidenceBall& ball, std::span<const double> theta);

// Enclosing-ball diameter (upper bound for the exact set's diameter).
double diameter(const ConfidenceBall& ball);

}  // namespace honest
