#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "honest/confidence_set.hpp"
#include "honest/duality.hpp"
#include "honest/ellipsoid.hpp"
#include "honest/function_catalog.hpp"
#include "honest/initial_estimators.hpp"

namespace honest {

enum class ModelKind { sequence, density, regression };

// Parameter profile placed in the submodel; the rate-scaled variant spreads
// equal energy over m = round(scale * n^(1/(2 beta1 + 1))) coordinates, the
// least favorable spread for truncation estimators at sample size n.
struct ProfileSpec {
    enum class Kind { zero, spike, equal_energy, geometric, equal_energy_rate };
    Kind kind = Kind::spike;
    long index = 1;      // spike position or equal-energy coordinate count
    double rho = 0.5;    // geometric factor
    double scale = 1.0;  // rate-scaled equal energy multiplier

    std::string name() const;
    static ProfileSpec parse(const std::string& text);
};

std::vector<double> make_theta(const ProfileSpec& profile, const Ellipsoid& submodel, long n);

struct EstimatorChoice {
    enum class Kind { projection, projection_oracle, adaptive };
    Kind kind = Kind::adaptive;
    long k = 1;  // fixed projection level

    std::string name() const;
    static EstimatorChoice parse(const std::string& text);
};

struct SigmaSpec {
    enum class Kind { known, estimated_window, estimated_auto };
    Kind kind = Kind::known;
    long m = 0, l = 0;                  // explicit window
    std::optional<double> known_value;  // "known:<v>": asserted source scale

    std::string name() const;
    static SigmaSpec parse(const std::string& text);
};

struct ExperimentConfig {
    ModelKind model = ModelKind::sequence;

    double beta = 1.0, L = 1.0;    // supermodel (honesty)
    std::optional<long> finite_dim;
    double beta1 = 1.0, L1 = 1.0;  // submodel (adaptation target)

    std::vector<ProfileSpec> profiles = {ProfileSpec{}};
    std::vector<long> n_grid = {256};
    double alpha = 0.05;
    long reps = 2000;

    QuantileRule::Mode rule = QuantileRule::Mode::normal;
    long sim_reps = 2000;  // simulated-rule draws

    SigmaSpec sigma;
    EstimatorChoice estimator;
    bool project_center = true;
    bool conservative_floor = false;

    double sigma2 = 1.0;  // generation noise scale (sequence model)
    ErrorDistribution::Family errors = ErrorDistribution::Family::standard_normal;

    // Density / regression generation.
    FunctionSpec target = FunctionSpec::uniform_density();
    NoiseSpec noise;

    // Sparse runs: entries "sqrt", "full", "zero" or an integer.
    std::vector<std::string> sparse_D = {"sqrt", "full"};

    // Duality runs.
    double eps = 0.5;
    ProfileSpec far_profile = ProfileSpec{};

    // Normality runs.
    std::vector<long> k_list = {200};
    double resid_scale = 2.0;  // residual magnitude in noise-sd units

    std::uint64_t master_seed = 1;
    std::string out_path;

    void validate() const;
};

ExperimentConfig load_config_file(const std::string& path);

struct CoverageRow {
    std::string profile;
    long n = 0;
    double coverage = 0.0;
    double mean_diameter = 0.0;
    double median_diameter = 0.0;
    double mean_radius = 0.0;
    double mean_sqrtk_sigma_err = 0.0;  // sqrt(k) |sigma-hat^2 - sigma^2|, 0 when known
};
struct CoverageReport {
    ExperimentConfig cfg;
    std::vector<CoverageRow> rows;
};

struct RateRow {
    std::string profile;
    long n = 0;
    double median_diameter = 0.0;
    double mean_diameter = 0.0;
};
struct RateReport {
    ExperimentConfig cfg;
    std::vector<RateRow> rows;
    double slope = 0.0;
    double slope_se = 0.0;
};

struct NormalityRow {
    std::string family;
    std::string residuals;
    long k = 0;
    long n = 0;
    double ks_distance = 0.0;
    double regularity_pass_rate = 0.0;
    double eps_used = 0.0;
};
struct NormalityReport {
    ExperimentConfig cfg;
    std::vector<NormalityRow> rows;
};

struct SparseRow {
    long n = 0;
    long D = 0;
    double median_diameter = 0.0;
    double mean_diameter = 0.0;
    double floor_rate = 0.0;  // max(n^-1/4, sqrt(D/n) + sqrt(log(2n/D)/n))
    double ratio = 0.0;
};
struct SparseReport {
    ExperimentConfig cfg;
    std::vector<SparseRow> rows;
};

struct DualityRow {
    long n = 0;
    double beta = 0, L = 0, beta1 = 0, L1 = 0, eps = 0;
    double reject_rate = 0.0;   // decision 1 under the far parameter (type-I error)
    double accept_rate = 0.0;   // decision 1 under theta_1 (power side)
    double floor_rate = 0.0;
    double ratio = 0.0;         // median diameter / floor rate
    // Extra diagnostics, not part of the CSV schema:
    double est_err_rate = 0.0;        // P(d(center, theta) > diameter) under theta_far
    double null_diam_lt_eps = 0.0;    // P(diameter < eps) under theta_1
    double median_diameter = 0.0;
};
struct DualityReport {
    ExperimentConfig cfg;
    std::vector<DualityRow> rows;
};

CoverageReport run_coverage(const ExperimentConfig& cfg);
RateReport run_rates(const ExperimentConfig& cfg);
NormalityReport run_normality(const ExperimentConfig& cfg);
SparseReport run_sparse(const ExperimentConfig& cfg);
DualityReport run_duality(const ExperimentConfig& cfg);

void write_csv(const CoverageReport&, std::ostream&);
void write_csv(const RateReport&, std::ostream&);
void write_csv(const NormalityReport&, std::ostream&);
void write_csv(const SparseReport&, std::ostream&);
void write_csv(const DualityReport&, std::ostream&);

// Flat one-row serialization of a ball (confset subcommand).
void write_csv(const ConfidenceBall&, std::ostream&);

}  // namespace honest
