#pragma once

#include <optional>
#include <span>
#include <vector>

namespace honest {

// Sobolev ball S(beta, L): all square-summable sequences with
// sum_i theta_i^2 i^(2 beta) <= L^2. With finite_dim set, coordinates past
// that dimension must vanish (finite sequence model).
struct Ellipsoid {
    double beta;
    double L;
    std::optional<long> finite_dim;

    Ellipsoid(double beta_, double L_, std::optional<long> dim = std::nullopt);

    // sum_i theta_i^2 i^(2 beta) over the given coordinates.
    double sobolev_norm_sq(std::span<const double> theta) const;

    bool contains(std::span<const double> theta) const;
};

// Test-parameter profiles placed on (or inside) the S(beta, L) boundary.
struct BoundaryProfile {
    enum class Kind { single_spike, equal_energy, geometric };
    Kind kind;
    long index = 1;     // spike position / equal-energy coordinate count
    double rho = 0.5;   // geometric decay factor

    static BoundaryProfile spike(long i) { return {Kind::single_spike, i, 0.0}; }
    static BoundaryProfile equal_energy(long k) { return {Kind::equal_energy, k, 0.0}; }
    static BoundaryProfile geometric(double rho) { return {Kind::geometric, 1, rho}; }
};

// Returns theta of length K with Sobolev norm exactly L^2 (boundary), or
// throws std::invalid_argument when the profile cannot fit in K coordinates.
std::vector<double> boundary_theta(const Ellipsoid& model, const BoundaryProfile& profile,
                                   long K);

}  // namespace honest
