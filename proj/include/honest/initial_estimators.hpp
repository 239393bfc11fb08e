#pragma once

#include <optional>
#include <span>
#include <vector>

#include "honest/ellipsoid.hpp"
#include "honest/sequence_model.hpp"

namespace honest {

struct CenterEstimate {
    std::vector<double> theta_hat;
    long k_used = 0;
    bool projected = false;
};

// Truncation estimator: hat_i = X_i for i <= k, 0 beyond.
CenterEstimate projection_estimator(const SequenceSample& first, long k);

// Unbiased-risk truncation selection: minimizes
//   URE(k) = k sigma^2/n + sum_{i>k}(X_i^2 - sigma^2/n)
// over the grid, ties toward smaller k. sigma2_override substitutes an
// estimated noise scale for the sample's own.
CenterEstimate adaptive_estimator(const SequenceSample& first, std::span<const long> k_grid,
                                  std::optional<double> sigma2_override = std::nullopt);

// l2-metric projection onto the ellipsoid: theta_i / (1 + lambda i^(2 beta))
// with lambda >= 0 chosen by bisection so the constraint binds.
std::vector<double> project_to_ellipsoid(std::span<const double> theta_hat,
                                         const Ellipsoid& model);

// Initial-estimator regularity diagnostic:
// max_{i<=k} |hat_i - theta_i|^2 <= eps * sum_{i<=k} (hat_i - theta_i)^2.
bool center_regularity_diagnostic(std::span<const double> theta_hat, std::span<const double> theta,
                             long k, double eps);

}  // namespace honest
