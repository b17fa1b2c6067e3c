#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "confseq/distributions.hpp"
#include "confseq/engine.hpp"
#include "confseq/errors.hpp"
#include "confseq/parallel.hpp"
#include "confseq/rng.hpp"
#include "confseq/scalar_bounds.hpp"
#include "confseq/spaces.hpp"
#include "confseq/tuning.hpp"

namespace confseq {

struct ExperimentConfig {
    DistributionSpec dist = DistributionSpec::uniform_cube(5);
    std::vector<std::uint64_t> n_grid;
    std::uint64_t reps = 100;
    double alpha = 0.05;
    std::vector<Method> methods{Method::Hoeffding, Method::OracleBernstein, Method::EmpiricalBernstein};
    std::uint64_t seed = 0;
    double c1 = 0.5;
    double c2 = 0.25;
    /// Overrides dist.norm_bound(); needed when the distribution sits at the origin.
    std::optional<double> norm_bound;

    double b() const { return norm_bound ? *norm_bound : dist.norm_bound(); }

    BoundConfig bound_config() const {
        BoundConfig cfg;
        cfg.b_norm_bound = b();
        cfg.alpha = alpha;
        cfg.c1 = c1;
        cfg.c2 = c2;
        return cfg;
    }

    void validate() const {
        if (reps == 0) throw ConfigError("reps must be >= 1");
        if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
        for (std::size_t i = 0; i < n_grid.size(); ++i) {
            if (n_grid[i] == 0) throw ConfigError("n_grid entries must be >= 1");
            if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid must be strictly increasing");
        }
        if (methods.empty()) throw ConfigError("methods must not be empty");
        for (Method m : methods)
            if (m == Method::FiniteLIL) throw ConfigError("FiniteLIL is not a radius-experiment method");
        bound_config().validate();
    }
};

struct RadiusRow {
    std::uint64_t n;
    Method method;
    double mean_radius;
    double sd_radius;
};

namespace detail {
inline std::pair<double, double> mean_sd(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

/// Empirical Bernstein batch radius on the first n draws of the stream keyed by (seed, rep).
inline double replay_batch_radius(const DistributionSpec& dist, const SpaceSpec& space, const BoundConfig& cfg,
                                  std::uint64_t n, std::uint64_t seed, std::uint64_t rep) {
    Engine engine(space, cfg, Schedule::batch(n, cfg));
    engine.set_warning_sink(nullptr);
    CounterRng rng(seed, stream_id(rep, 0));
    for (std::uint64_t i = 0; i < n; ++i) engine.observe(dist.sample(rng));
    return engine.ball().radius;
}
}  // namespace detail

/// Mean and sd of each method's radius over `reps` i.i.d. samples at every n.
///
/// Each (rep, n) cell replays the prefix of the rep's stream with the batch
/// schedule tuned to that n. The comparator radii do not depend on the data,
/// so their sd is 0.
inline std::vector<RadiusRow> run_radius_experiment(const ExperimentConfig& cfg, unsigned workers = default_workers()) {
    cfg.validate();
    const SpaceSpec space = SpaceSpec::euclidean(cfg.dist.dim());
    const BoundConfig bound = cfg.bound_config();

    const std::size_t cells = cfg.n_grid.size();
    std::vector<std::vector<double>> eb(cells, std::vector<double>(cfg.reps));
    bool want_eb = false;
    for (Method m : cfg.methods) want_eb = want_eb || m == Method::EmpiricalBernstein;
    if (want_eb) {
        parallel_for(
            cfg.reps,
            [&](std::size_t rep) {
                for (std::size_t k = 0; k < cells; ++k)
                    eb[k][rep] = detail::replay_batch_radius(cfg.dist, space, bound, cfg.n_grid[k], cfg.seed, rep);
            },
            workers);
    }

    std::vector<RadiusRow> rows;
    for (std::size_t k = 0; k < cells; ++k) {
        const std::uint64_t n = cfg.n_grid[k];
        for (Method m : cfg.methods) {
            switch (m) {
                case Method::Hoeffding:
                    rows.push_back({n, m, hoeffding_mean_radius(n, bound, cfg.dist.centered_bound()), 0.0});
                    break;
                case Method::OracleBernstein:
                    rows.push_back({n, m, bernstein_mean_radius(n, cfg.dist.true_sigma_sq(), bound, cfg.dist.centered_bound()), 0.0});
                    break;
                case Method::EmpiricalBernstein: {
                    const auto [mean, sd] = detail::mean_sd(eb[k]);
                    rows.push_back({n, m, mean, sd});
                    break;
                }
                case Method::FiniteLIL: break;
            }
        }
    }
    return rows;
}

struct WidthRow {
    std::uint64_t n;
    double sqrt_n_times_radius;  // mean over reps
    double sd;
    double limit;
};

/// sqrt(n) times the tuned batch radius at each checkpoint, against
/// sigma D sqrt(2 log(2/alpha)). Every checkpoint replays the same stream
/// prefix with lambda tuned to that n.
inline std::vector<WidthRow> run_width_convergence(const DistributionSpec& dist, const std::vector<std::uint64_t>& checkpoints,
                                                   double alpha, std::uint64_t seed, std::uint64_t reps = 1,
                                                   std::optional<double> norm_bound = std::nullopt,
                                                   unsigned workers = default_workers()) {
    ExperimentConfig ec;
    ec.dist = dist;
    ec.n_grid = checkpoints;
    ec.reps = reps;
    ec.alpha = alpha;
    ec.seed = seed;
    ec.norm_bound = norm_bound;
    ec.methods = {Method::EmpiricalBernstein};
    ec.validate();

    const SpaceSpec space = SpaceSpec::euclidean(dist.dim());
    const BoundConfig bound = ec.bound_config();
    const double limit = limiting_width(std::sqrt(dist.true_sigma_sq()), bound);

    std::vector<std::vector<double>> scaled(checkpoints.size(), std::vector<double>(reps));
    parallel_for(
        reps,
        [&](std::size_t rep) {
            for (std::size_t k = 0; k < checkpoints.size(); ++k) {
                const double n = static_cast<double>(checkpoints[k]);
                scaled[k][rep] = std::sqrt(n) * detail::replay_batch_radius(dist, space, bound, checkpoints[k], seed, rep);
            }
        },
        workers);

    std::vector<WidthRow> rows;
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const auto [mean, sd] = detail::mean_sd(scaled[k]);
        rows.push_back({checkpoints[k], mean, sd, limit});
    }
    return rows;
}

inline void write_radius_csv(std::ostream& out, const std::vector<RadiusRow>& rows) {
    out << "n,method,mean_radius,sd_radius\n";
    out << std::setprecision(17);
    for (const auto& r : rows) out << r.n << ',' << method_name(r.method) << ',' << r.mean_radius << ',' << r.sd_radius << '\n';
}

inline void write_width_csv(std::ostream& out, const std::vector<WidthRow>& rows) {
    out << "n,sqrt_n_times_radius,limit\n";
    out << std::setprecision(17);
    for (const auto& r : rows) out << r.n << ',' << r.sqrt_n_times_radius << ',' << r.limit << '\n';
}

/// Sidecar metadata for a radius experiment (tuning constants, seed, bounds).
inline nlohmann::json experiment_metadata(const ExperimentConfig& cfg) {
    nlohmann::json methods = nlohmann::json::array();
    for (Method m : cfg.methods) methods.push_back(std::string(method_name(m)));
    return {{"dist", cfg.dist.describe()},
            {"n_grid", cfg.n_grid},
            {"reps", cfg.reps},
            {"alpha", cfg.alpha},
            {"c1", cfg.c1},
            {"c2", cfg.c2},
            {"seed", cfg.seed},
            {"norm_bound", cfg.b()},
            {"centered_bound", cfg.dist.centered_bound()},
            {"true_sigma_sq", cfg.dist.true_sigma_sq()},
            {"methods", methods}};
}

}  // namespace confseq
