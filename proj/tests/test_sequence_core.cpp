#include <doctest.h>

#include <cmath>
#include <vector>

#include "honest/ellipsoid.hpp"
#include "honest/errors.hpp"
#include "honest/sequence_model.hpp"
#include "honest/stats.hpp"

using namespace honest;

TEST_SUITE("ellipsoid") {
    TEST_CASE("membership and norms") {
        const Ellipsoid e(1.0, 1.0);
        CHECK(e.contains(std::vector<double>{1.0}));
        CHECK(e.contains(std::vector<double>{0.0, 0.5}));   // 4 * 0.25 = 1
        CHECK_FALSE(e.contains(std::vector<double>{0.0, 0.6}));
        CHECK(e.sobolev_norm_sq(std::vector<double>{0.1, 0.2, 0.3}) ==
              doctest::Approx(0.01 + 0.04 * 4 + 0.09 * 9));
    }

    TEST_CASE("invalid parameters rejected") {
        CHECK_THROWS_AS(Ellipsoid(0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(Ellipsoid(1.0, -1.0), std::invalid_argument);
    }

    TEST_CASE("finite dimension forbids tail support") {
        const Ellipsoid e(1.0, 1.0, 2);
        CHECK(e.contains(std::vector<double>{0.5, 0.1}));
        CHECK_FALSE(e.contains(std::vector<double>{0.5, 0.0, 0.1}));
    }

    TEST_CASE("membership monotonicity: S(beta1, L1) inside S(beta, L)") {
        // Random members of the tighter ball stay members of the looser one.
        Rng rng(mix64(101));
        for (int trial = 0; trial < 50; ++trial) {
            const double beta = 0.3 + rng.uniform();
            const double beta1 = beta + rng.uniform();
            const double L1 = 0.2 + rng.uniform();
            const double L = L1 + rng.uniform();
            const Ellipsoid tight(beta1, L1), loose(beta, L);
            const long m = 1 + static_cast<long>(rng.uniform() * 12);
            const auto theta =
                boundary_theta(tight, BoundaryProfile::equal_energy(m), m + 2);
            CHECK(tight.contains(theta));
            CHECK(loose.contains(theta));
        }
    }
}

TEST_SUITE("boundary_theta") {
    TEST_CASE("single spike at i=1 on S(1,1)") {
        const auto theta = boundary_theta(Ellipsoid(1.0, 1.0), BoundaryProfile::spike(1), 4);
        CHECK(theta == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    }

    TEST_CASE("equal energy over two coordinates solves the boundary equation") {
        // theta_1^2 + 4 theta_2^2 = 1 with equal magnitudes: 1/sqrt(5).
        const auto theta =
            boundary_theta(Ellipsoid(1.0, 1.0), BoundaryProfile::equal_energy(2), 2);
        CHECK(theta[0] == doctest::Approx(0.4472135954999579).epsilon(1e-12));
        CHECK(theta[1] == doctest::Approx(0.4472135954999579).epsilon(1e-12));
    }

    TEST_CASE("every profile lands exactly on the boundary and inside the set") {
        for (double beta : {0.5, 1.0, 2.0}) {
            for (double L : {0.5, 1.0, 3.0}) {
                const Ellipsoid e(beta, L);
                for (const auto& p :
                     {BoundaryProfile::spike(3), BoundaryProfile::equal_energy(7),
                      BoundaryProfile::geometric(0.6)}) {
                    const auto theta = boundary_theta(e, p, 64);
                    CHECK(e.sobolev_norm_sq(theta) == doctest::Approx(L * L).epsilon(1e-10));
                    CHECK(e.contains(theta));
                }
            }
        }
    }

    TEST_CASE("infeasible profiles rejected") {
        const Ellipsoid e(1.0, 1.0);
        CHECK_THROWS_AS(boundary_theta(e, BoundaryProfile::spike(10), 4),
                        std::invalid_argument);
        CHECK_THROWS_AS(boundary_theta(e, BoundaryProfile::equal_energy(5), 4),
                        std::invalid_argument);
        CHECK_THROWS_AS(boundary_theta(e, BoundaryProfile::geometric(1.5), 4),
                        std::invalid_argument);
    }
}

TEST_SUITE("error_distribution") {
    TEST_CASE("frozen moment constants match Monte Carlo") {
        for (const auto& dist :
             {ErrorDistribution::standard_normal(), ErrorDistribution::centered_exponential(),
              ErrorDistribution::scaled_uniform()}) {
            Rng rng(mix64(7));
            const long R = 200000;
            NeumaierSum m1, m2, m3, m4;
            for (long i = 0; i < R; ++i) {
                const double e = dist.draw(rng);
                m1.add(e);
                m2.add(e * e);
                m3.add(e * e * e);
                m4.add(e * e * e * e);
            }
            const double mean1 = m1.value() / R, mean2 = m2.value() / R;
            const double mean3 = m3.value() / R, mean4 = m4.value() / R;
            CHECK(std::fabs(mean1) < 0.02);
            CHECK(mean2 == doctest::Approx(1.0).epsilon(0.03));
            // Var(eps^2) = E eps^4 - (E eps^2)^2, Cov(eps^2, eps) = E eps^3.
            CHECK(mean4 - mean2 * mean2 == doctest::Approx(dist.var_eps2).epsilon(0.08));
            CHECK(std::fabs(mean3 - mean2 * mean1 - dist.cov_eps2_eps) < 0.08);
        }
    }
}

TEST_SUITE("sample_sequence") {
    TEST_CASE("deterministic given the seed") {
        const std::vector<double> theta = {0.3, -0.2, 0.1};
        const auto a = sample_sequence(theta, 1.0, 50, 8, 99);
        const auto b = sample_sequence(theta, 1.0, 50, 8, 99);
        CHECK(a.values == b.values);
        const auto c = sample_sequence(theta, 1.0, 50, 8, 100);
        CHECK(a.values != c.values);
    }

    TEST_CASE("Monte Carlo mean recovers theta (zero and nonzero)") {
        const double sigma2 = 0.5;
        const long n = 40, R = 10000;
        const std::vector<double> theta = {0.0, 0.25};
        NeumaierSum s0, s1;
        for (long rep = 0; rep < R; ++rep) {
            const auto x = sample_sequence(theta, sigma2, n, 2, 1000 + rep);
            s0.add(x.values[0]);
            s1.add(x.values[1]);
        }
        const double tol = 4.0 * std::sqrt(sigma2 / (n * static_cast<double>(R)));
        CHECK(std::fabs(s0.value() / R - 0.0) < tol);
        CHECK(std::fabs(s1.value() / R - 0.25) < tol);
    }

    TEST_CASE("Monte Carlo noise variance matches sigma2/n within 5%") {
        const Ellipsoid model(1.0, 1.0);
        const auto theta = boundary_theta(model, BoundaryProfile::equal_energy(3), 3);
        const double sigma2 = 2.0;
        const long n = 25, R = 10000;
        std::vector<double> noise(R);
        for (long rep = 0; rep < R; ++rep) {
            const auto x = sample_sequence(theta, sigma2, n, 3, 555 + rep);
            noise[static_cast<std::size_t>(rep)] = x.values[1] - theta[1];
        }
        CHECK(variance(noise) == doctest::Approx(sigma2 / n).epsilon(0.05));
    }

    TEST_CASE("invalid arguments") {
        CHECK_THROWS_AS(sample_sequence({}, 0.0, 10, 4, 1), std::invalid_argument);
        CHECK_THROWS_AS(sample_sequence({}, 1.0, 0, 4, 1), std::invalid_argument);
        CHECK_THROWS_AS(sample_sequence({}, 1.0, 10, 0, 1), std::invalid_argument);
    }
}

TEST_SUITE("split_randomize") {
    TEST_CASE("U = 1/2 collapses the device") {
        const auto x = sample_sequence(std::vector<double>{0.4, 0.1}, 1.0, 30, 2, 5);
        const std::vector<double> u = {0.5, 0.5};
        const auto pair = split_with_uniforms(x, u);
        CHECK(pair.first.values == x.values);
        CHECK(pair.second.values == x.values);
        CHECK(pair.first.sigma2 == 2.0 * x.sigma2);
        CHECK(pair.second.sigma2 == 2.0 * x.sigma2);
    }

    TEST_CASE("halves reconstruct the source") {
        // The identity X' + X'' = 2X is exact in real arithmetic; the second
        // half is built as the complement against 2X, so the reconstruction
        // can be off by at most one rounding of the final addition.
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto x =
                sample_sequence(std::vector<double>{0.4, 0.1, -0.3}, 1.3, 21, 3, 77 + seed);
            const auto pair = split_randomize(x, 8 + seed);
            for (std::size_t i = 0; i < x.values.size(); ++i) {
                const double sum = pair.first.values[i] + pair.second.values[i];
                const double target = 2.0 * x.values[i];
                const double tol = 2.0 * std::numeric_limits<double>::epsilon() *
                                   std::max({1.0, std::fabs(pair.first.values[i]),
                                             std::fabs(target)});
                CHECK(std::fabs(sum - target) <= tol);
            }
        }
    }

    TEST_CASE("halves carry variance 2 sigma^2/n and are uncorrelated") {
        const double sigma2 = 1.0, theta0 = 0.7;
        const long n = 50, R = 10000;
        std::vector<double> first(R), second(R);
        for (long rep = 0; rep < R; ++rep) {
            const auto x =
                sample_sequence(std::vector<double>{theta0}, sigma2, n, 1, 31000 + rep);
            const auto pair = split_randomize(x, 62000 + rep);
            first[static_cast<std::size_t>(rep)] = pair.first.values[0];
            second[static_cast<std::size_t>(rep)] = pair.second.values[0];
        }
        const double vf = variance(first), vs = variance(second);
        CHECK(vf == doctest::Approx(2.0 * sigma2 / n).epsilon(0.05));
        CHECK(vs == doctest::Approx(2.0 * sigma2 / n).epsilon(0.05));
        const double mf = mean(first), ms = mean(second);
        double cov = 0.0;
        for (long rep = 0; rep < R; ++rep) {
            cov += (first[static_cast<std::size_t>(rep)] - mf) *
                   (second[static_cast<std::size_t>(rep)] - ms);
        }
        cov /= static_cast<double>(R - 1);
        CHECK(std::fabs(cov / std::sqrt(vf * vs)) < 0.02);
    }
}

TEST_SUITE("sigma_hat") {
    TEST_CASE("direct arithmetic on a fixed window") {
        SequenceSample x;
        x.values = {9.0, 9.0, 0.1, -0.1, 0.2, 0.0};
        x.n = 100;
        x.sigma2 = 1.0;
        CHECK(sigma_hat(x, 2, 4) == doctest::Approx(1.5).epsilon(1e-12));
    }

    TEST_CASE("window bounds enforced") {
        SequenceSample x;
        x.values = {1.0, 2.0};
        x.n = 10;
        CHECK_THROWS_AS(sigma_hat(x, 1, 2), std::invalid_argument);
        CHECK_THROWS_AS(sigma_hat(x, 0, 0), std::invalid_argument);
    }

    TEST_CASE("mean matches sigma^2 plus the signal shift") {
        // E sigma-hat^2 = sigma^2 + (n/l) sum_window theta_i^2.
        const double sigma2 = 1.0;
        const long n = 100, l = 16, m = 4, R = 10000;
        std::vector<double> theta(m + l, 0.0);
        theta[5] = 0.2;  // inside the window
        const double shift = static_cast<double>(n) / l * 0.04;
        NeumaierSum acc;
        for (long rep = 0; rep < R; ++rep) {
            const auto x = sample_sequence(theta, sigma2, n, m + l, 91000 + rep);
            acc.add(sigma_hat(x, m, l));
        }
        const double se = sigma2 * std::sqrt(2.0 / l) / std::sqrt(static_cast<double>(R));
        CHECK(std::fabs(acc.value() / R - (sigma2 + shift)) < 3.0 * se * 1.5);
    }

    TEST_CASE("MSE bound with a calibrated constant transfers across configs") {
        const double sigma2 = 1.0;
        const auto mse_for = [&](double beta, long n, long m, long l, std::uint64_t seed) {
            const Ellipsoid model(beta, 1.0);
            const auto theta =
                boundary_theta(model, BoundaryProfile::geometric(0.9), m + l);
            NeumaierSum acc;
            const long R = 4000;
            for (long rep = 0; rep < R; ++rep) {
                const auto x = sample_sequence(theta, sigma2, n, m + l, seed + rep);
                acc.add(sq(sigma_hat(x, m, l) - sigma2));
            }
            return acc.value() / R;
        };
        const auto bound_expr = [&](double beta, long n, long m, long l) {
            const double nn = n, mm = m, ll = l;
            return nn * nn / (ll * ll * std::pow(mm, 4.0 * beta)) +
                   nn / (ll * ll * std::pow(mm, 2.0 * beta)) + 1.0 / ll;
        };
        // Fit C once, then require it (with slack for Monte Carlo noise)
        // on other (beta, n, m, l) configurations.
        const double C = mse_for(1.0, 256, 16, 64, 1) / bound_expr(1.0, 256, 16, 64);
        CHECK(mse_for(1.0, 1024, 24, 120, 2) <= 2.0 * C * bound_expr(1.0, 1024, 24, 120));
        CHECK(mse_for(0.5, 512, 40, 80, 3) <= 2.0 * C * bound_expr(0.5, 512, 40, 80));
    }
}

TEST_SUITE("select_window") {
    TEST_CASE("frozen arithmetic examples") {
        const auto [m1, l1] = select_window(1.0, 1024);
        CHECK(m1 == 16);
        CHECK(l1 == 111);  // ceil(16 log 1024)
        const auto [m2, l2] = select_window(0.5, 4096);
        CHECK(m2 == 256);
    }

    TEST_CASE("finite model at beta = 1/4 is infeasible") {
        CHECK_THROWS_AS(select_window(0.25, 4096, 4096), infeasible_window_error);
    }

    TEST_CASE("cap leaves a usable window for larger beta") {
        const auto [m, l] = select_window(1.0, 1024, 1024);
        CHECK(m == 16);
        CHECK(l > 0);
        CHECK(m + l <= 1024);
    }
}
