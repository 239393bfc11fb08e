#include "honest/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "honest/csv.hpp"
#include "honest/normal.hpp"
#include "honest/stats.hpp"

namespace honest {

namespace {

ErrorDistribution make_errors(ErrorDistribution::Family f) {
    switch (f) {
        case ErrorDistribution::Family::standard_normal:
            return ErrorDistribution::standard_normal();
        case ErrorDistribution::Family::centered_exponential:
            return ErrorDistribution::centered_exponential();
        case ErrorDistribution::Family::scaled_uniform:
            return ErrorDistribution::scaled_uniform();
    }
    throw std::logic_error("unknown error family");
}

std::vector<std::string> split_text(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

long parse_long(const std::string& s) {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
    return v;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
    return v;
}

// Runs the replication body in parallel; per-replication results land in
// index-addressed slots, so aggregation order never depends on scheduling.
template <class Fn>
void parallel_reps(long reps, Fn&& body) {
    std::atomic<bool> failed{false};
    std::string message;
#pragma omp parallel for schedule(dynamic)
    for (long rep = 0; rep < reps; ++rep) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            body(rep);
        } catch (const std::exception& e) {
            if (!failed.exchange(true)) {
#pragma omp critical
                message = e.what();
            }
        }
    }
    if (failed) throw std::runtime_error("replication failed: " + message);
}

double mean_of(const std::vector<double>& xs) { return mean(std::span<const double>(xs)); }

}  // namespace

// ---------------------------------------------------------------------------
// Config plumbing

std::string ProfileSpec::name() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::zero: os << "zero"; break;
        case Kind::spike: os << "spike:" << index; break;
        case Kind::equal_energy: os << "ee:" << index; break;
        case Kind::geometric: os << "geometric:" << format_csv_double(rho); break;
        case Kind::equal_energy_rate: os << "ee_rate:" << format_csv_double(scale); break;
    }
    return os.str();
}

ProfileSpec ProfileSpec::parse(const std::string& text) {
    const auto parts = split_text(text, ':');
    ProfileSpec p;
    if (parts[0] == "zero" && parts.size() == 1) {
        p.kind = Kind::zero;
    } else if (parts[0] == "spike" && parts.size() == 2) {
        p.kind = Kind::spike;
        p.index = parse_long(parts[1]);
    } else if (parts[0] == "ee" && parts.size() == 2) {
        p.kind = Kind::equal_energy;
        p.index = parse_long(parts[1]);
    } else if (parts[0] == "geometric" && parts.size() == 2) {
        p.kind = Kind::geometric;
        p.rho = parse_double(parts[1]);
    } else if (parts[0] == "ee_rate" && parts.size() == 2) {
        p.kind = Kind::equal_energy_rate;
        p.scale = parse_double(parts[1]);
    } else {
        throw std::invalid_argument("bad profile spec: " + text);
    }
    return p;
}

std::vector<double> make_theta(const ProfileSpec& profile, const Ellipsoid& submodel, long n) {
    switch (profile.kind) {
        case ProfileSpec::Kind::zero:
            return {};
        case ProfileSpec::Kind::spike:
            return boundary_theta(submodel, BoundaryProfile::spike(profile.index),
                                  profile.index);
        case ProfileSpec::Kind::equal_energy:
            return boundary_theta(submodel, BoundaryProfile::equal_energy(profile.index),
                                  profile.index);
        case ProfileSpec::Kind::geometric: {
            long K = 1;
            while (std::pow(profile.rho, static_cast<double>(K)) > 1e-9 && K < 4096) ++K;
            return boundary_theta(submodel, BoundaryProfile::geometric(profile.rho), K);
        }
        case ProfileSpec::Kind::equal_energy_rate: {
            const double rate =
                std::pow(static_cast<double>(n), 1.0 / (2.0 * submodel.beta + 1.0));
            const long m = std::max<long>(2, std::lround(profile.scale * rate));
            return boundary_theta(submodel, BoundaryProfile::equal_energy(m), m);
        }
    }
    throw std::logic_error("make_theta: unknown profile");
}

std::string EstimatorChoice::name() const {
    switch (kind) {
        case Kind::projection: return "projection:" + std::to_string(k);
        case Kind::projection_oracle: return "projection:oracle";
        case Kind::adaptive: return "adaptive";
    }
    return "?";
}

EstimatorChoice EstimatorChoice::parse(const std::string& text) {
    const auto parts = split_text(text, ':');
    EstimatorChoice e;
    if (parts[0] == "adaptive" && parts.size() == 1) {
        e.kind = Kind::adaptive;
    } else if (parts[0] == "projection" && parts.size() == 2) {
        if (parts[1] == "oracle") {
            e.kind = Kind::projection_oracle;
        } else {
            e.kind = Kind::projection;
            e.k = parse_long(parts[1]);
            if (e.k < 1) throw std::invalid_argument("projection level must be >= 1");
        }
    } else {
        throw std::invalid_argument("bad estimator spec: " + text);
    }
    return e;
}

std::string SigmaSpec::name() const {
    switch (kind) {
        case Kind::known:
            return known_value ? "known:" + format_csv_double(*known_value)
                               : std::string("known");
        case Kind::estimated_window:
            return "estimated:" + std::to_string(m) + "," + std::to_string(l);
        case Kind::estimated_auto: return "estimated:auto";
    }
    return "?";
}

SigmaSpec SigmaSpec::parse(const std::string& text) {
    SigmaSpec s;
    if (text == "known") {
        s.kind = Kind::known;
        return s;
    }
    const auto parts = split_text(text, ':');
    if (parts.size() == 2 && parts[0] == "known") {
        s.kind = Kind::known;
        s.known_value = parse_double(parts[1]);
        if (!(*s.known_value > 0.0)) {
            throw std::invalid_argument("sigma known value must be > 0");
        }
        return s;
    }
    if (parts.size() == 2 && parts[0] == "estimated") {
        if (parts[1] == "auto") {
            s.kind = Kind::estimated_auto;
            return s;
        }
        const auto ml = split_text(parts[1], ',');
        if (ml.size() == 2) {
            s.kind = Kind::estimated_window;
            s.m = parse_long(ml[0]);
            s.l = parse_long(ml[1]);
            return s;
        }
    }
    throw std::invalid_argument("bad sigma spec: " + text);
}

void ExperimentConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("config: alpha in (0,1)");
    if (reps < 100) throw std::invalid_argument("config: reps must be >= 100");
    if (n_grid.empty()) throw std::invalid_argument("config: empty n grid");
    if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
        std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end()) {
        throw std::invalid_argument("config: n grid must be strictly ascending");
    }
    for (long n : n_grid) {
        if (n < 2) throw std::invalid_argument("config: n must be >= 2");
    }
    if (profiles.empty()) throw std::invalid_argument("config: no parameter profiles");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("config: sigma2 must be > 0");
    if (!(beta > 0.0 && L > 0.0 && beta1 > 0.0 && L1 > 0.0)) {
        throw std::invalid_argument("config: regularity parameters must be > 0");
    }
    if (beta1 < beta || L1 > L) {
        throw std::invalid_argument("config: submodel must nest in the supermodel");
    }
    if (model != ModelKind::sequence && estimator.kind == EstimatorChoice::Kind::adaptive) {
        throw std::invalid_argument(
            "config: the adaptive estimator applies to the sequence model only");
    }
    if (model != ModelKind::sequence && rule == QuantileRule::Mode::simulated) {
        throw std::invalid_argument("config: simulated quantiles are sequence-model only");
    }
    if (rule == QuantileRule::Mode::simulated && sim_reps < 1000) {
        throw std::invalid_argument("config: simulated rule needs sim_reps >= 1000");
    }
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "model") {
                if (val == "sequence") cfg.model = ModelKind::sequence;
                else if (val == "density") cfg.model = ModelKind::density;
                else if (val == "regression") cfg.model = ModelKind::regression;
                else throw std::invalid_argument("bad model: " + val);
            } else if (key == "beta") cfg.beta = parse_double(val);
            else if (key == "L") cfg.L = parse_double(val);
            else if (key == "beta1") cfg.beta1 = parse_double(val);
            else if (key == "L1") cfg.L1 = parse_double(val);
            else if (key == "finite_dim") cfg.finite_dim = parse_long(val);
            else if (key == "profiles") {
                cfg.profiles.clear();
                for (const auto& p : split_text(val, ';')) {
                    cfg.profiles.push_back(ProfileSpec::parse(p));
                }
            } else if (key == "n") {
                cfg.n_grid.clear();
                for (const auto& t : split_text(val, ',')) cfg.n_grid.push_back(parse_long(t));
            } else if (key == "alpha") cfg.alpha = parse_double(val);
            else if (key == "reps") cfg.reps = parse_long(val);
            else if (key == "rule") {
                if (val == "normal") cfg.rule = QuantileRule::Mode::normal;
                else if (val == "chebyshev") cfg.rule = QuantileRule::Mode::chebyshev;
                else if (val == "simulated") cfg.rule = QuantileRule::Mode::simulated;
                else throw std::invalid_argument("bad rule: " + val);
            } else if (key == "sim_reps") cfg.sim_reps = parse_long(val);
            else if (key == "sigma") cfg.sigma = SigmaSpec::parse(val);
            else if (key == "estimator") cfg.estimator = EstimatorChoice::parse(val);
            else if (key == "project_center") cfg.project_center = (val == "true" || val == "1");
            else if (key == "conservative_floor")
                cfg.conservative_floor = (val == "true" || val == "1");
            else if (key == "sigma2") cfg.sigma2 = parse_double(val);
            else if (key == "errors") {
                if (val == "normal") cfg.errors = ErrorDistribution::Family::standard_normal;
                else if (val == "exponential")
                    cfg.errors = ErrorDistribution::Family::centered_exponential;
                else if (val == "uniform") cfg.errors = ErrorDistribution::Family::scaled_uniform;
                else throw std::invalid_argument("bad errors: " + val);
            } else if (key == "target") {
                const auto parts = split_text(val, ':');
                if (parts[0] == "uniform") cfg.target = FunctionSpec::uniform_density();
                else if (parts[0] == "cosine" && parts.size() == 2) {
                    const auto cj = split_text(parts[1], ',');
                    cfg.target = FunctionSpec::cosine_density(
                        parse_double(cj[0]), cj.size() > 1 ? parse_long(cj[1]) : 1);
                } else if (parts[0] == "density" && parts.size() == 2) {
                    std::vector<double> coeffs;
                    for (const auto& c : split_text(parts[1], ',')) coeffs.push_back(parse_double(c));
                    cfg.target = FunctionSpec::density(std::move(coeffs));
                } else if (parts[0] == "trig" && parts.size() == 2) {
                    std::vector<double> coeffs;
                    for (const auto& c : split_text(parts[1], ',')) coeffs.push_back(parse_double(c));
                    cfg.target = FunctionSpec::regression_target(std::move(coeffs));
                } else {
                    throw std::invalid_argument("bad target: " + val);
                }
            } else if (key == "noise") {
                const auto parts = split_text(val, ':');
                if (parts.size() != 2) throw std::invalid_argument("bad noise: " + val);
                if (parts[0] == "normal") cfg.noise.family = NoiseSpec::Family::normal;
                else if (parts[0] == "exponential")
                    cfg.noise.family = NoiseSpec::Family::centered_exponential;
                else if (parts[0] == "uniform") cfg.noise.family = NoiseSpec::Family::scaled_uniform;
                else throw std::invalid_argument("bad noise family: " + parts[0]);
                const auto vv = split_text(parts[1], ',');
                cfg.noise.var0 = parse_double(vv[0]);
                cfg.noise.var_slope = vv.size() > 1 ? parse_double(vv[1]) : 0.0;
            } else if (key == "sparse_D") {
                cfg.sparse_D = split_text(val, ',');
            } else if (key == "eps") cfg.eps = parse_double(val);
            else if (key == "far_profile") cfg.far_profile = ProfileSpec::parse(val);
            else if (key == "k_list") {
                cfg.k_list.clear();
                for (const auto& t : split_text(val, ',')) cfg.k_list.push_back(parse_long(t));
            } else if (key == "resid_scale") cfg.resid_scale = parse_double(val);
            else if (key == "seed") cfg.master_seed = static_cast<std::uint64_t>(parse_long(val));
            else if (key == "out") cfg.out_path = val;
            else throw std::invalid_argument("unknown key: " + key);
        } catch (const std::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Sequence-model replication kernel

namespace {

struct SeqCell {
    Ellipsoid super;
    Ellipsoid sub;
    std::vector<double> theta;
    CutoffPlan plan;
    long n = 0;
    long K = 0;
    long m = 0, l = 0;  // sigma window (estimated modes)
    long k_oracle = 1;
    std::vector<long> k_grid;
    ErrorDistribution dist;
    std::optional<CutoffPlan> plan_override;
    bool unconstrained = false;  // Theta = R^n (sparse runs)
};

SeqCell prepare_seq_cell(const ExperimentConfig& cfg, const std::vector<double>& theta, long n,
                         std::optional<CutoffPlan> plan_override = std::nullopt,
                         bool unconstrained = false) {
    SeqCell cell{Ellipsoid(cfg.beta, cfg.L, cfg.finite_dim),
                 Ellipsoid(cfg.beta1, cfg.L1, cfg.finite_dim),
                 theta,
                 CutoffPlan{},
                 n,
                 0,
                 0,
                 0,
                 1,
                 {},
                 make_errors(cfg.errors),
                 plan_override,
                 unconstrained};
    cell.plan = plan_override ? *plan_override : cutoff(cell.super, n);
    if (cfg.sigma.kind == SigmaSpec::Kind::estimated_window) {
        cell.m = cfg.sigma.m;
        cell.l = cfg.sigma.l;
    } else if (cfg.sigma.kind == SigmaSpec::Kind::estimated_auto) {
        std::tie(cell.m, cell.l) = select_window(cfg.beta, n, cfg.finite_dim);
    }
    cell.k_oracle = std::max<long>(
        1, ceil_tol(std::pow(static_cast<double>(n), 1.0 / (2.0 * cfg.beta1 + 1.0))));

    long K = std::max<long>({cell.plan.k, static_cast<long>(theta.size()), cell.m + cell.l,
                             cell.k_oracle});
    if (cfg.estimator.kind == EstimatorChoice::Kind::projection) K = std::max(K, cfg.estimator.k);
    if (cfg.finite_dim) K = std::min(K, *cfg.finite_dim);
    cell.K = K;

    cell.k_grid.resize(static_cast<std::size_t>(K));
    std::iota(cell.k_grid.begin(), cell.k_grid.end(), 1L);
    return cell;
}

struct SeqRepOut {
    char covered = 0;
    double diam = 0.0;
    double radius = 0.0;
    double sq_err = 0.0;
    ConfidenceBall ball;
};

SeqRepOut seq_replicate(const ExperimentConfig& cfg, const SeqCell& cell,
                        std::uint64_t rep_seed, bool keep_ball = false) {
    const SequenceSample x = sample_sequence(cell.theta, cfg.sigma2, cell.n, cell.K,
                                             mix_seed(rep_seed, 1), cell.dist);
    const SplitPair pair = split_randomize(x, mix_seed(rep_seed, 2));

    CenterEstimate center;
    switch (cfg.estimator.kind) {
        case EstimatorChoice::Kind::adaptive: {
            std::optional<double> ure_sigma2;
            if (cfg.sigma.kind != SigmaSpec::Kind::known) {
                ure_sigma2 = sigma_hat(pair.first, cell.m, cell.l);
            }
            center = adaptive_estimator(pair.first, cell.k_grid, ure_sigma2);
            break;
        }
        case EstimatorChoice::Kind::projection:
            center = projection_estimator(pair.first, std::min(cfg.estimator.k, cell.K));
            break;
        case EstimatorChoice::Kind::projection_oracle:
            center = projection_estimator(pair.first, std::min(cell.k_oracle, cell.K));
            break;
    }
    if (cfg.project_center && !cell.unconstrained) {
        center.theta_hat = project_to_ellipsoid(center.theta_hat, cell.super);
        center.projected = true;
    }

    // known:<v> asserts the source scale v; the split doubles it.
    SigmaSource src =
        (cfg.sigma.kind == SigmaSpec::Kind::known)
            ? SigmaSource::known(cfg.sigma.known_value ? 2.0 * *cfg.sigma.known_value
                                                       : pair.second.sigma2)
            : SigmaSource::estimated(cell.m, cell.l);
    BallOptions opts;
    opts.conservative_floor = cfg.conservative_floor;
    opts.plan_override = cell.plan_override;
    if (cfg.errors != ErrorDistribution::Family::standard_normal) opts.errors = cell.dist;

    QuantileRule rule;
    rule.mode = cfg.rule;
    rule.alpha = cfg.alpha;
    rule.sim_reps = cfg.sim_reps;
    rule.sim_seed = mix_seed(rep_seed, 3);

    const ConfidenceBall ball =
        build_ball(pair.second, center.theta_hat,
                   cell.unconstrained ? std::nullopt : std::optional<Ellipsoid>(cell.super),
                   cfg.alpha, rule, src, opts);

    SeqRepOut out;
    out.covered = contains(ball, cell.theta) ? 1 : 0;
    out.radius = ball.radius;
    out.diam = diameter(ball);
    if (cfg.sigma.kind != SigmaSpec::Kind::known) {
        const double shat = sigma_hat(pair.second, cell.m, cell.l);
        out.sq_err = std::sqrt(static_cast<double>(cell.plan.k)) *
                     std::fabs(shat - pair.second.sigma2);
    }
    if (keep_ball) out.ball = ball;
    return out;
}

// Density / regression replication: split the points, center on empirical
// coefficients from the first half, build the ball from the second half.

long center_level(const ExperimentConfig& cfg, long n_half, long cap) {
    long k = 1;
    if (cfg.estimator.kind == EstimatorChoice::Kind::projection) {
        k = cfg.estimator.k;
    } else {
        k = std::max<long>(1, ceil_tol(std::pow(static_cast<double>(n_half),
                                                1.0 / (2.0 * cfg.beta1 + 1.0))));
    }
    return std::min(k, cap);
}

struct FunRepOut {
    char covered = 0;
    double diam = 0.0;
    double radius = 0.0;
};

FunRepOut fun_replicate(const ExperimentConfig& cfg, const Ellipsoid& super,
                        const std::vector<double>& theta_true, long n,
                        std::uint64_t rep_seed) {
    QuantileRule rule;
    rule.mode = cfg.rule;
    rule.alpha = cfg.alpha;
    BallOptions opts;
    opts.conservative_floor = cfg.conservative_floor;

    ConfidenceBall ball;
    if (cfg.model == ModelKind::density) {
        const DensitySample all = sample_density(cfg.target, n, rep_seed);
        const long n1 = n / 2;
        DensitySample first{{all.points.begin(), all.points.begin() + n1}, all.f_sup};
        DensitySample second{{all.points.begin() + n1, all.points.end()}, all.f_sup};
        const long kc = center_level(cfg, n1, cutoff(super, second.n()).k);
        std::vector<double> center = empirical_coeffs(first, kc);
        if (cfg.project_center) center = project_to_ellipsoid(center, super);
        ball = build_ball(second, center, super, cfg.alpha, rule, opts);
    } else {
        const RegressionSample all = sample_regression(cfg.target, cfg.noise, n, rep_seed);
        const long n1 = n / 2;
        RegressionSample first{{all.x.begin(), all.x.begin() + n1},
                               {all.y.begin(), all.y.begin() + n1},
                               all.f_sup,
                               all.sigma2_sup};
        RegressionSample second{{all.x.begin() + n1, all.x.end()},
                                {all.y.begin() + n1, all.y.end()},
                                all.f_sup,
                                all.sigma2_sup};
        const long kc = center_level(cfg, n1, cutoff(super, second.n()).k);
        std::vector<double> center = empirical_coeffs(first, kc);
        if (cfg.project_center) center = project_to_ellipsoid(center, super);
        ball = build_ball(second, center, super, cfg.alpha, rule, opts);
    }

    FunRepOut out;
    out.covered = contains(ball, theta_true) ? 1 : 0;
    out.radius = ball.radius;
    out.diam = diameter(ball);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Runners

CoverageReport run_coverage(const ExperimentConfig& cfg) {
    cfg.validate();
    CoverageReport report;
    report.cfg = cfg;

    const Ellipsoid super(cfg.beta, cfg.L, cfg.finite_dim);
    const Ellipsoid sub(cfg.beta1, cfg.L1, cfg.finite_dim);

    for (std::size_t pi = 0; pi < cfg.profiles.size(); ++pi) {
        for (long n : cfg.n_grid) {
            std::vector<char> covered(static_cast<std::size_t>(cfg.reps));
            std::vector<double> diams(static_cast<std::size_t>(cfg.reps));
            std::vector<double> radii(static_cast<std::size_t>(cfg.reps));
            std::vector<double> sqerr(static_cast<std::size_t>(cfg.reps), 0.0);

            if (cfg.model == ModelKind::sequence) {
                const auto theta = make_theta(cfg.profiles[pi], sub, n);
                const SeqCell cell = prepare_seq_cell(cfg, theta, n);
                parallel_reps(cfg.reps, [&](long rep) {
                    const std::uint64_t seed =
                        mix_seed(cfg.master_seed, pi, static_cast<std::uint64_t>(n),
                                 static_cast<std::uint64_t>(rep));
                    const SeqRepOut out = seq_replicate(cfg, cell, seed);
                    covered[static_cast<std::size_t>(rep)] = out.covered;
                    diams[static_cast<std::size_t>(rep)] = out.diam;
                    radii[static_cast<std::size_t>(rep)] = out.radius;
                    sqerr[static_cast<std::size_t>(rep)] = out.sq_err;
                });
            } else {
                const std::vector<double> theta_true = cfg.target.coeffs;
                if (!super.contains(theta_true)) {
                    throw std::invalid_argument(
                        "run_coverage: target lies outside the supermodel");
                }
                parallel_reps(cfg.reps, [&](long rep) {
                    const std::uint64_t seed =
                        mix_seed(cfg.master_seed, pi, static_cast<std::uint64_t>(n),
                                 static_cast<std::uint64_t>(rep));
                    const FunRepOut out = fun_replicate(cfg, super, theta_true, n, seed);
                    covered[static_cast<std::size_t>(rep)] = out.covered;
                    diams[static_cast<std::size_t>(rep)] = out.diam;
                    radii[static_cast<std::size_t>(rep)] = out.radius;
                });
            }

            CoverageRow row;
            row.profile = (cfg.model == ModelKind::sequence) ? cfg.profiles[pi].name()
                                                             : std::string("catalog");
            row.n = n;
            long hits = 0;
            for (char c : covered) hits += c;
            row.coverage = static_cast<double>(hits) / static_cast<double>(cfg.reps);
            row.mean_diameter = mean_of(diams);
            row.median_diameter = median(diams);
            row.mean_radius = mean_of(radii);
            row.mean_sqrtk_sigma_err = mean_of(sqerr);
            report.rows.push_back(std::move(row));
        }
        if (cfg.model != ModelKind::sequence) break;  // catalog target: one profile
    }
    return report;
}

RateReport run_rates(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.profiles.size() != 1) {
        throw std::invalid_argument("run_rates: exactly one profile per run");
    }
    if (cfg.model != ModelKind::sequence) {
        throw std::invalid_argument("run_rates: sequence model only");
    }
    RateReport report;
    report.cfg = cfg;

    const Ellipsoid sub(cfg.beta1, cfg.L1, cfg.finite_dim);
    std::vector<double> log_n, log_med;
    for (long n : cfg.n_grid) {
        const auto theta = make_theta(cfg.profiles[0], sub, n);
        const SeqCell cell = prepare_seq_cell(cfg, theta, n);
        std::vector<double> diams(static_cast<std::size_t>(cfg.reps));
        parallel_reps(cfg.reps, [&](long rep) {
            const std::uint64_t seed = mix_seed(cfg.master_seed, 0, static_cast<std::uint64_t>(n),
                                                static_cast<std::uint64_t>(rep));
            diams[static_cast<std::size_t>(rep)] = seq_replicate(cfg, cell, seed).diam;
        });
        RateRow row;
        row.profile = cfg.profiles[0].name();
        row.n = n;
        row.median_diameter = median(diams);
        row.mean_diameter = mean_of(diams);
        report.rows.push_back(row);
        log_n.push_back(std::log(static_cast<double>(n)));
        log_med.push_back(std::log(row.median_diameter));
    }
    const OlsFit fit = ols_fit(log_n, log_med);
    report.slope = fit.slope;
    report.slope_se = fit.slope_se;
    return report;
}

NormalityReport run_normality(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.model != ModelKind::sequence) {
        throw std::invalid_argument("run_normality: sequence model only");
    }
    NormalityReport report;
    report.cfg = cfg;
    const ErrorDistribution dist = make_errors(cfg.errors);

    const char* resid_names[] = {"zero", "spread", "spike"};
    for (long k : cfg.k_list) {
        if (k < 1) throw std::invalid_argument("run_normality: k must be >= 1");
        for (long n : cfg.n_grid) {
            const double sd = std::sqrt(cfg.sigma2 / static_cast<double>(n));
            for (int rmode = 0; rmode < 3; ++rmode) {
                // theta = 0; the statistic depends only on the residuals
                // d_i = theta_i - hat_i.
                std::vector<double> theta;
                std::vector<double> theta_hat(static_cast<std::size_t>(k), 0.0);
                if (rmode == 1) {
                    for (auto& v : theta_hat) v = -cfg.resid_scale * sd;
                } else if (rmode == 2) {
                    theta_hat[0] = -cfg.resid_scale * sd * std::sqrt(static_cast<double>(k));
                }
                std::vector<double> stats(static_cast<std::size_t>(cfg.reps));
                parallel_reps(cfg.reps, [&](long rep) {
                    const std::uint64_t seed =
                        mix_seed(cfg.master_seed, static_cast<std::uint64_t>(k) * 4 + rmode,
                                 static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep));
                    const SequenceSample x =
                        sample_sequence(theta, cfg.sigma2, n, k, mix_seed(seed, 1), dist);
                    stats[static_cast<std::size_t>(rep)] =
                        standardized_statistic(x, theta, theta_hat, k, dist);
                });
                NormalityRow row;
                row.family = dist.name();
                row.residuals = resid_names[rmode];
                row.k = k;
                row.n = n;
                row.ks_distance = ks_distance(stats, [](double t) { return norm_cdf(t); });
                row.eps_used = std::log(static_cast<double>(std::max<long>(k, 2))) /
                               static_cast<double>(k);
                row.regularity_pass_rate =
                    center_regularity_diagnostic(theta_hat, theta, k, row.eps_used) ? 1.0 : 0.0;
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

SparseReport run_sparse(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.model != ModelKind::sequence) {
        throw std::invalid_argument("run_sparse: sequence model only");
    }
    SparseReport report;
    report.cfg = cfg;

    for (long n : cfg.n_grid) {
        for (std::size_t di = 0; di < cfg.sparse_D.size(); ++di) {
            const std::string& spec = cfg.sparse_D[di];
            long D;
            if (spec == "sqrt") D = ceil_tol(std::sqrt(static_cast<double>(n)));
            else if (spec == "full") D = n;
            else if (spec == "zero") D = 0;
            else D = parse_long(spec);
            if (D < 0 || D > n) throw std::invalid_argument("run_sparse: bad D " + spec);

            std::vector<double> theta(static_cast<std::size_t>(D),
                                      D > 0 ? 1.0 / std::sqrt(static_cast<double>(D)) : 0.0);

            ExperimentConfig sub_cfg = cfg;
            sub_cfg.finite_dim = n;
            sub_cfg.project_center = false;
            sub_cfg.estimator.kind = EstimatorChoice::Kind::adaptive;
            const SeqCell cell =
                prepare_seq_cell(sub_cfg, theta, n, full_dimension_cutoff(n), true);

            std::vector<double> diams(static_cast<std::size_t>(cfg.reps));
            parallel_reps(cfg.reps, [&](long rep) {
                const std::uint64_t seed = mix_seed(cfg.master_seed, di,
                                                    static_cast<std::uint64_t>(n),
                                                    static_cast<std::uint64_t>(rep));
                diams[static_cast<std::size_t>(rep)] = seq_replicate(sub_cfg, cell, seed).diam;
            });

            SparseRow row;
            row.n = n;
            row.D = D;
            row.median_diameter = median(diams);
            row.mean_diameter = mean_of(diams);
            const double nn = static_cast<double>(n);
            double floor = std::pow(nn, -0.25);
            if (D > 0) {
                const double dd = static_cast<double>(D);
                floor = std::max(floor, std::sqrt(dd / nn) + std::sqrt(std::log(2.0 * nn / dd) / nn));
            }
            row.floor_rate = floor;
            row.ratio = row.median_diameter / floor;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

DualityReport run_duality(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.model != ModelKind::sequence) {
        throw std::invalid_argument("run_duality: sequence model only");
    }
    DualityReport report;
    report.cfg = cfg;

    const Ellipsoid super(cfg.beta, cfg.L, cfg.finite_dim);
    const Ellipsoid sub(cfg.beta1, cfg.L1, cfg.finite_dim);
    const std::vector<double> theta1;  // origin, a member of every ellipsoid

    for (long n : cfg.n_grid) {
        const auto theta_far = make_theta(cfg.far_profile, sub, n);
        const double separation = l2_distance(theta_far, theta1);
        if (!(separation > cfg.eps)) {
            throw std::invalid_argument(
                "run_duality: far profile is within eps of theta_1");
        }
        const TestProblem problem{theta1, cfg.eps, super};

        const SeqCell cell_far = prepare_seq_cell(cfg, theta_far, n);
        std::vector<char> reject(static_cast<std::size_t>(cfg.reps));
        std::vector<char> est_err(static_cast<std::size_t>(cfg.reps));
        std::vector<double> diams(static_cast<std::size_t>(cfg.reps));
        parallel_reps(cfg.reps, [&](long rep) {
            const std::uint64_t seed = mix_seed(cfg.master_seed, 1,
                                                static_cast<std::uint64_t>(n),
                                                static_cast<std::uint64_t>(rep));
            const SeqRepOut out = seq_replicate(cfg, cell_far, seed, /*keep_ball=*/true);
            reject[static_cast<std::size_t>(rep)] =
                static_cast<char>(confset_to_test(out.ball, problem));
            const double err = l2_distance(confset_to_estimator(out.ball), theta_far);
            est_err[static_cast<std::size_t>(rep)] = err > out.diam ? 1 : 0;
            diams[static_cast<std::size_t>(rep)] = out.diam;
        });

        const SeqCell cell_null = prepare_seq_cell(cfg, theta1, n);
        std::vector<char> accept(static_cast<std::size_t>(cfg.reps));
        std::vector<char> small_diam(static_cast<std::size_t>(cfg.reps));
        parallel_reps(cfg.reps, [&](long rep) {
            const std::uint64_t seed = mix_seed(cfg.master_seed, 2,
                                                static_cast<std::uint64_t>(n),
                                                static_cast<std::uint64_t>(rep));
            const SeqRepOut out = seq_replicate(cfg, cell_null, seed, /*keep_ball=*/true);
            accept[static_cast<std::size_t>(rep)] =
                static_cast<char>(confset_to_test(out.ball, problem));
            small_diam[static_cast<std::size_t>(rep)] = out.diam < cfg.eps ? 1 : 0;
        });

        DualityRow row;
        row.n = n;
        row.beta = cfg.beta;
        row.L = cfg.L;
        row.beta1 = cfg.beta1;
        row.L1 = cfg.L1;
        row.eps = cfg.eps;
        long r = 0, a = 0, e = 0, s = 0;
        for (char c : reject) r += c;
        for (char c : accept) a += c;
        for (char c : est_err) e += c;
        for (char c : small_diam) s += c;
        row.reject_rate = static_cast<double>(r) / static_cast<double>(cfg.reps);
        row.accept_rate = static_cast<double>(a) / static_cast<double>(cfg.reps);
        row.est_err_rate = static_cast<double>(e) / static_cast<double>(cfg.reps);
        row.null_diam_lt_eps = static_cast<double>(s) / static_cast<double>(cfg.reps);
        row.median_diameter = median(diams);
        row.floor_rate = testing_floor_rate(cfg.beta, cfg.beta1, n);
        row.ratio = row.median_diameter / row.floor_rate;
        report.rows.push_back(std::move(row));
    }
    return report;
}

// ---------------------------------------------------------------------------
// CSV emission

namespace {
const char* model_name(ModelKind m) {
    switch (m) {
        case ModelKind::sequence: return "sequence";
        case ModelKind::density: return "density";
        case ModelKind::regression: return "regression";
    }
    return "?";
}

const char* rule_name(QuantileRule::Mode m) {
    switch (m) {
        case QuantileRule::Mode::normal: return "normal";
        case QuantileRule::Mode::chebyshev: return "chebyshev";
        case QuantileRule::Mode::simulated: return "simulated";
    }
    return "?";
}
}  // namespace

void write_csv(const CoverageReport& rpt, std::ostream& os) {
    write_csv_line(os, {"model", "profile", "n", "alpha", "rule", "sigma", "estimator",
                        "errors", "reps", "coverage", "mean_diameter", "median_diameter",
                        "mean_radius", "mean_sqrtk_sigma_err"});
    const ErrorDistribution dist = make_errors(rpt.cfg.errors);
    for (const auto& row : rpt.rows) {
        write_csv_line(
            os, {model_name(rpt.cfg.model), row.profile, std::to_string(row.n),
                 format_csv_double(rpt.cfg.alpha), rule_name(rpt.cfg.rule),
                 rpt.cfg.sigma.name(), rpt.cfg.estimator.name(), dist.name(),
                 std::to_string(rpt.cfg.reps), format_csv_double(row.coverage),
                 format_csv_double(row.mean_diameter), format_csv_double(row.median_diameter),
                 format_csv_double(row.mean_radius),
                 format_csv_double(row.mean_sqrtk_sigma_err)});
    }
}

void write_csv(const RateReport& rpt, std::ostream& os) {
    write_csv_line(os, {"model", "profile", "beta", "beta1", "n", "alpha", "reps",
                        "median_diameter", "mean_diameter", "slope", "slope_se"});
    for (const auto& row : rpt.rows) {
        write_csv_line(os, {model_name(rpt.cfg.model), row.profile,
                            format_csv_double(rpt.cfg.beta), format_csv_double(rpt.cfg.beta1),
                            std::to_string(row.n), format_csv_double(rpt.cfg.alpha),
                            std::to_string(rpt.cfg.reps),
                            format_csv_double(row.median_diameter),
                            format_csv_double(row.mean_diameter), format_csv_double(rpt.slope),
                            format_csv_double(rpt.slope_se)});
    }
}

void write_csv(const NormalityReport& rpt, std::ostream& os) {
    write_csv_line(os, {"family", "residuals", "k", "n", "reps", "ks_distance",
                        "regularity_pass_rate", "eps_used"});
    for (const auto& row : rpt.rows) {
        write_csv_line(os, {row.family, row.residuals, std::to_string(row.k),
                            std::to_string(row.n), std::to_string(rpt.cfg.reps),
                            format_csv_double(row.ks_distance),
                            format_csv_double(row.regularity_pass_rate),
                            format_csv_double(row.eps_used)});
    }
}

void write_csv(const SparseReport& rpt, std::ostream& os) {
    write_csv_line(os, {"n", "D", "reps", "median_diameter", "mean_diameter", "floor_rate",
                        "ratio"});
    for (const auto& row : rpt.rows) {
        write_csv_line(os, {std::to_string(row.n), std::to_string(row.D),
                            std::to_string(rpt.cfg.reps),
                            format_csv_double(row.median_diameter),
                            format_csv_double(row.mean_diameter),
                            format_csv_double(row.floor_rate), format_csv_double(row.ratio)});
    }
}

void write_csv(const DualityReport& rpt, std::ostream& os) {
    write_csv_line(os, {"n", "beta", "L", "beta1", "L1", "eps", "reject_rate", "accept_rate",
                        "floor_rate", "ratio"});
    for (const auto& row : rpt.rows) {
        write_csv_line(os, {std::to_string(row.n), format_csv_double(row.beta),
                            format_csv_double(row.L), format_csv_double(row.beta1),
                            format_csv_double(row.L1), format_csv_double(row.eps),
                            format_csv_double(row.reject_rate),
                            format_csv_double(row.accept_rate),
                            format_csv_double(row.floor_rate), format_csv_double(row.ratio)});
    }
}

void write_csv(const ConfidenceBall& ball, std::ostream& os) {
    std::vector<std::string> header = {"radius", "k",    "bias",          "z",
                                       "r_hat",  "a",    "b",             "c",
                                       "floor_applied", "empty_interior"};
    for (std::size_t i = 0; i < ball.center.size(); ++i) {
        header.push_back("center_" + std::to_string(i + 1));
    }
    write_csv_line(os, header);
    std::vector<std::string> cells = {format_csv_double(ball.radius),
                                      std::to_string(ball.k),
                                      format_csv_double(ball.bias),
                                      format_csv_double(ball.z),
                                      format_csv_double(ball.r_hat.r),
                                      format_csv_double(ball.r_hat.a),
                                      format_csv_double(ball.r_hat.b),
                                      format_csv_double(ball.r_hat.c),
                                      ball.floor_applied ? "1" : "0",
                                      ball.empty_interior() ? "1" : "0"};
    for (double c : ball.center) cells.push_back(format_csv_double(c));
    write_csv_line(os, cells);
}

}  // namespace honest
