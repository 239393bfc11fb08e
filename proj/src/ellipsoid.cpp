#include "honest/ellipsoid.hpp"

#include <cmath>
#include <stdexcept>

#include "honest/stats.hpp"

namespace honest {

Ellipsoid::Ellipsoid(double beta_, double L_, std::optional<long> dim)
    : beta(beta_), L(L_), finite_dim(dim) {
    if (!(beta > 0.0)) throw std::invalid_argument("Ellipsoid: beta must be > 0");
    if (!(L > 0.0)) throw std::invalid_argument("Ellipsoid: L must be > 0");
    if (finite_dim && *finite_dim < 1) {
        throw std::invalid_argument("Ellipsoid: finite_dim must be >= 1");
    }
}

double Ellipsoid::sobolev_norm_sq(std::span<const double> theta) const {
    NeumaierSum s;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        s.add(theta[i] * theta[i] * std::pow(static_cast<double>(i + 1), 2.0 * beta));
    }
    return s.value();
}

bool Ellipsoid::contains(std::span<const double> theta) const {
    if (finite_dim) {
        for (std::size_t i = static_cast<std::size_t>(*finite_dim); i < theta.size(); ++i) {
            if (theta[i] != 0.0) return false;
        }
    }
    // Tiny relative slack keeps exact-boundary constructions members.
    return sobolev_norm_sq(theta) <= L * L * (1.0 + 1e-12);
}

std::vector<double> boundary_theta(const Ellipsoid& model, const BoundaryProfile& profile,
                                   long K) {
    if (K < 1) throw std::invalid_argument("boundary_theta: K must be >= 1");
    const long cap = model.finite_dim ? std::min(*model.finite_dim, K) : K;
    std::vector<double> theta(static_cast<std::size_t>(K), 0.0);

    switch (profile.kind) {
        case BoundaryProfile::Kind::single_spike: {
            const long i = profile.index;
            if (i < 1 || i > cap) {
                throw std::invalid_argument("boundary_theta: spike index out of range");
            }
            theta[static_cast<std::size_t>(i - 1)] =
                model.L / std::pow(static_cast<double>(i), model.beta);
            break;
        }
        case BoundaryProfile::Kind::equal_energy: {
            const long m = profile.index;
            if (m < 1 || m > cap) {
                throw std::invalid_argument("boundary_theta: equal-energy count out of range");
            }
            double wsum = 0.0;
            for (long i = 1; i <= m; ++i) {
                wsum += std::pow(static_cast<double>(i), 2.0 * model.beta);
            }
            const double t = model.L / std::sqrt(wsum);
            for (long i = 0; i < m; ++i) theta[static_cast<std::size_t>(i)] = t;
            break;
        }
        case BoundaryProfile::Kind::geometric: {
            const double rho = profile.rho;
            if (!(rho > 0.0 && rho < 1.0)) {
                throw std::invalid_argument("boundary_theta: rho must lie in (0,1)");
            }
            double wsum = 0.0;
            for (long i = 1; i <= cap; ++i) {
                wsum += std::pow(rho, 2.0 * static_cast<double>(i)) *
                        std::pow(static_cast<double>(i), 2.0 * model.beta);
            }
            const double amp = model.L / std::sqrt(wsum);
            for (long i = 1; i <= cap; ++i) {
                theta[static_cast<std::size_t>(i - 1)] =
                    amp * std::pow(rho, static_cast<double>(i));
            }
            break;
        }
    }
    return theta;
}

}  // namespace honest
