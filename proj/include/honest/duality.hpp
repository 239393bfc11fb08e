#pragma once

#include <span>
#include <vector>

#include "honest/confidence_set.hpp"
#include "honest/ellipsoid.hpp"

namespace honest {

// One-point testing problem: null {theta_1} against alternatives in the
// supermodel at distance more than eps.
struct TestProblem {
    std::vector<double> theta1;
    double eps = 0.0;
    Ellipsoid model;
};

// Decision 1 ("the parameter is near theta_1") iff the enclosing ball lies
// strictly inside the closed eps-ball around theta_1; boundary ties decide
// 0, the conservative direction for the level.
int confset_to_test(const ConfidenceBall& ball, const TestProblem& problem);

// The induced point estimator: a canonical point of the set (its center,
// also when the set has empty interior).
std::span<const double> confset_to_estimator(const ConfidenceBall& ball);

// max(n^(-beta1/(2 beta1 + 1)), n^(-beta/(2 beta + 1/2))): estimation rate
// on the submodel vs testing rate from the supermodel.
double testing_floor_rate(double beta, double beta1, long n);

double l2_distance(std::span<const double> a, std::span<const double> b);

}  // namespace honest
