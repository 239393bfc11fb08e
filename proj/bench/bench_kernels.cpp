// Kernel benchmark: naive O(n^2 k) double sum vs the O(nk) pairwise
// identity (serial and OpenMP), plus a parallel-vs-serial coverage run with
// a byte-identity check on the CSV output.

#include <chrono>
#include <cstdio>
#include <omp.h>
#include <sstream>
#include <string>

#include "honest/experiments.hpp"
#include "honest/functional_estimators.hpp"

using namespace honest;

namespace {

double time_ms(auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void bench_ustat(long n, long k, bool with_naive) {
    const FunctionSpec f = FunctionSpec::cosine_density(0.4, 1);
    const DensitySample data = sample_density(f, n, 7u);
    const std::vector<double> theta_hat(static_cast<std::size_t>(k), 0.1);

    double r_fast = 0.0, r_naive = 0.0;
    const double t_fast_par = time_ms([&] { r_fast = density_r_kn(data, theta_hat, k).r; });
    double t_fast_ser = 0.0;
    {
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
        t_fast_ser = time_ms([&] { r_fast = density_r_kn(data, theta_hat, k).r; });
        omp_set_num_threads(saved);
    }
    if (!with_naive) {
        std::printf("u-stat  n=%5ld k=%4ld | naive     (skipped) | fast-serial %8.2f ms | "
                    "fast-omp %8.2f ms\n",
                    n, k, t_fast_ser, t_fast_par);
        return;
    }
    const double t_naive = time_ms([&] { r_naive = density_r_kn_naive(data, theta_hat, k); });

    const double rel = std::fabs(r_fast - r_naive) / std::max(1e-30, std::fabs(r_naive));
    std::printf("u-stat  n=%5ld k=%4ld | naive %9.2f ms | fast-serial %8.2f ms | "
                "fast-omp %8.2f ms | speedup vs naive %7.1fx | rel diff %.2e\n",
                n, k, t_naive, t_fast_ser, t_fast_par, t_naive / t_fast_par, rel);
}

std::string coverage_csv(int threads) {
    ExperimentConfig cfg;
    cfg.model = ModelKind::sequence;
    cfg.beta = cfg.beta1 = 1.0;
    cfg.L = cfg.L1 = 1.0;
    cfg.profiles = {ProfileSpec::parse("spike:1"), ProfileSpec::parse("ee:8")};
    cfg.n_grid = {256, 1024};
    cfg.reps = 400;
    cfg.master_seed = 20240601;

    const int saved = omp_get_max_threads();
    omp_set_num_threads(threads);
    const CoverageReport rpt = run_coverage(cfg);
    omp_set_num_threads(saved);

    std::ostringstream os;
    write_csv(rpt, os);
    return os.str();
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    bench_ustat(500, 32, true);
    bench_ustat(1000, 64, true);
    bench_ustat(4000, 64, false);
    bench_ustat(8000, 256, false);

    std::printf("\ncoverage determinism/scaling (2 profiles x 2 n, 400 reps):\n");
    std::string ref;
    double t1 = 0.0;
    for (int threads : {1, omp_get_max_threads()}) {
        std::string csv;
        const double t = time_ms([&] { csv = coverage_csv(threads); });
        if (threads == 1) {
            ref = csv;
            t1 = t;
        }
        std::printf("  threads=%2d  %9.1f ms  speedup %5.2fx  csv %s\n", threads, t,
                    t1 / t, csv == ref ? "byte-identical" : "MISMATCH");
        if (csv != ref) return 1;
    }
    return 0;
}
