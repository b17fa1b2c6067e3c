// confseq: confidence balls and sequences for bounded vector means.
//
//   confseq radius   --data x.csv --b 1            one batch ball as JSON
//   confseq stream   --data x.csv --b 1 [--lil]    one ball per observation, JSON lines
//   confseq simulate --config exp.json [--width]   radius table as CSV plus .meta.json
//   confseq verify   [--quick]                     certificate records, JSON lines
//   confseq echo     --data x.csv                  re-emit the parsed vectors as CSV
//
// Exit codes: 0 ok, 2 config error, 3 data error, 4 verification failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "confseq/engine.hpp"
#include "confseq/errors.hpp"
#include "confseq/harness.hpp"
#include "confseq/io.hpp"
#include "confseq/report_json.hpp"
#include "confseq/verification.hpp"

using namespace confseq;

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "JSON configuration file");
    cmd->add_option("--seed", c.seed, "seed for all randomness");
    cmd->add_option("--alpha", c.alpha, "error level in (0, 1)");
    cmd->add_option("--out", c.out, "output file (default stdout)");
}

RunConfig resolve(const Common& c) {
    RunConfig cfg = c.config_path.empty() ? parse_config("{}") : load_config(c.config_path);
    if (c.alpha) {
        if (!(*c.alpha > 0.0 && *c.alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");
        cfg.alpha = *c.alpha;
    }
    if (c.seed) cfg.seed = c.seed;
    if (!c.out.empty()) cfg.output = c.out;
    return cfg;
}

/// Seed from the flag or config, otherwise fresh entropy. The caller echoes it.
std::uint64_t seed_of(const RunConfig& cfg) {
    if (cfg.seed) return *cfg.seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

class Output {
public:
    explicit Output(const std::optional<std::string>& path) {
        if (path && !path->empty() && *path != "-") {
            file_.open(*path);
            if (!file_) throw ConfigError("cannot write output file '" + *path + "'");
            out_ = &file_;
        }
    }
    std::ostream& operator*() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_ = &std::cout;
};

std::vector<Vec> load_data(const std::string& path, const RunConfig& cfg) {
    auto rows = stream_from_csv(path, cfg.dim);
    if (rows.empty()) throw DataError("'" + path + "' contains no observations");
    return rows;
}

int cmd_radius(const Common& c, const std::string& data, std::optional<double> b) {
    RunConfig cfg = resolve(c);
    if (b) cfg.b = b;
    const auto rows = load_data(data, cfg);
    const SpaceSpec space = cfg.space(rows.front().size());
    const BoundConfig bound = cfg.bound(space);
    Output out(cfg.output);
    *out << to_json(batch_confidence_ball(rows, bound, space)).dump() << '\n';
    return exit_code::ok;
}

int cmd_stream(const Common& c, const std::string& data, std::optional<double> b, bool lil) {
    RunConfig cfg = resolve(c);
    if (b) cfg.b = b;
    const auto rows = load_data(data, cfg);
    const SpaceSpec space = cfg.space(rows.front().size());
    const BoundConfig bound = cfg.bound(space);
    if (lil && !supports_finite_lil(bound)) throw ConfigError("--lil requires alpha = 0.05 and b = 0.25");

    ScheduleKind kind = cfg.schedule.value_or(SequentialCS{});
    if (auto* batch = std::get_if<BatchCI>(&kind); batch && batch->n == 0) batch->n = rows.size();
    Engine engine(space, bound, Schedule(kind, bound));

    Output out(cfg.output);
    for (const Vec& x : rows) {
        engine.observe(x);
        *out << to_json(lil ? engine.lil_ball() : engine.ball()).dump() << '\n';
    }
    return exit_code::ok;
}

ExperimentConfig experiment_from(const RunConfig& cfg, std::uint64_t seed) {
    if (!cfg.experiment) throw ConfigError("simulate needs an \"experiment\" section");
    const auto& ex = *cfg.experiment;
    ExperimentConfig ec;
    ec.dist = ex.dist;
    ec.n_grid = ex.n_grid;
    ec.reps = ex.reps;
    ec.alpha = cfg.alpha;
    ec.methods = ex.methods;
    ec.seed = seed;
    ec.c1 = cfg.c1;
    ec.c2 = cfg.c2;
    ec.norm_bound = ex.norm_bound ? ex.norm_bound : cfg.b;
    ec.validate();
    return ec;
}

void write_metadata(const RunConfig& cfg, nlohmann::json meta) {
    if (cfg.output && !cfg.output->empty() && *cfg.output != "-") {
        const std::string path = *cfg.output + ".meta.json";
        std::ofstream m(path);
        if (!m) throw ConfigError("cannot write metadata file '" + path + "'");
        m << meta.dump(2) << '\n';
    } else {
        std::cerr << meta.dump() << '\n';
    }
}

int cmd_simulate(const Common& c, bool width) {
    const RunConfig cfg = resolve(c);
    const std::uint64_t seed = seed_of(cfg);
    const ExperimentConfig ec = experiment_from(cfg, seed);
    nlohmann::json meta = experiment_metadata(ec);
    meta["seed_source"] = cfg.seed ? "given" : "entropy";

    Output out(cfg.output);
    if (width) {
        const auto& ex = *cfg.experiment;
        const auto checkpoints = ex.width_checkpoints.empty() ? ex.n_grid : ex.width_checkpoints;
        meta["mode"] = "width";
        meta["checkpoints"] = checkpoints;
        write_width_csv(*out, run_width_convergence(ec.dist, checkpoints, ec.alpha, seed, ec.reps, ec.norm_bound));
    } else {
        meta["mode"] = "radius";
        write_radius_csv(*out, run_radius_experiment(ec));
    }
    write_metadata(cfg, meta);
    return exit_code::ok;
}

int cmd_verify(const Common& c, bool quick, const std::vector<std::string>& suites) {
    auto want = [&](const std::string& s) { return suites.empty() || std::find(suites.begin(), suites.end(), s) != suites.end(); };
    const RunConfig cfg = resolve(c);
    const std::uint64_t seed = seed_of(cfg);
    Output out(cfg.output);
    bool ok = true;
    auto emit = [&](nlohmann::json j) {
        ok = ok && j["passed"].get<bool>();
        *out << j.dump() << '\n' << std::flush;
    };

    *out << nlohmann::json{{"kind", "meta"}, {"seed", seed}, {"seed_source", cfg.seed ? "given" : "entropy"}, {"quick", quick}}.dump()
         << '\n';

    if (want("grid")) {
        emit(to_json(certify_lemma_main()));
        const auto corners = certify_lemma_main_corners_50digit();
        auto cj = to_json(corners.report);
        cj["max_abs_disagreement"] = corners.max_abs_disagreement;
        emit(cj);
        emit(to_json(certify_cosh_sinh(quick ? 100000 : 1000000, seed)));
        emit(to_json(certify_q_majorization()));
        emit(to_json(certify_psi_sandwich()));
    }
    if (want("mc")) {
        const std::uint64_t inner = quick ? 10000 : 100000;
        emit(to_json(supermartingale_mc_check(DistributionSpec::rademacher_cube(5), 20, inner, seed)));
        emit(to_json(supermartingale_mc_check(DistributionSpec::uniform_cube(5), 20, inner, seed + 1)));
    }
    if (want("coverage"))
        emit(to_json(ville_coverage(DistributionSpec::rademacher_cube(5), Method::EmpiricalBernstein, 1000,
                                    quick ? 200 : 2000, cfg.alpha, seed + 2)));
    if (want("lil"))
        emit(to_json(asymptotic_lil_check(DistributionSpec::rademacher_cube(1), quick ? 100000 : 1000000, seed + 3)));
    return ok ? exit_code::ok : exit_code::verification;
}

int cmd_echo(const Common& c, const std::string& data) {
    const RunConfig cfg = resolve(c);
    const auto rows = stream_from_csv(data, cfg.dim);
    Output out(cfg.output);
    write_vectors_csv(*out, rows);
    return exit_code::ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anytime-valid confidence balls for bounded vector means"};
    app.require_subcommand(1);

    Common common;
    std::string data;
    std::optional<double> b;
    bool lil = false, width = false, quick = false;

    auto* radius = app.add_subcommand("radius", "batch confidence ball from a CSV file");
    add_common(radius, common);
    radius->add_option("--data", data, "CSV of observations")->required();
    radius->add_option("--b", b, "norm bound |X| <= b");

    auto* stream = app.add_subcommand("stream", "sequential confidence balls, one JSON line per observation");
    add_common(stream, common);
    stream->add_option("--data", data, "CSV of observations")->required();
    stream->add_option("--b", b, "norm bound |X| <= b");
    stream->add_flag("--lil", lil, "stitched LIL ball (alpha = 0.05, b = 0.25 only)");

    auto* simulate = app.add_subcommand("simulate", "radius-vs-n experiment, CSV output");
    add_common(simulate, common);
    simulate->add_flag("--width", width, "sqrt(n) * radius against its limit instead");

    auto* verify = app.add_subcommand("verify", "numerical certificates and Monte Carlo checks");
    add_common(verify, common);
    verify->add_flag("--quick", quick, "smaller Monte Carlo sizes");
    std::vector<std::string> suites;
    verify->add_option("--suite", suites, "subset to run: grid, mc, coverage, lil (default all)")
        ->delimiter(',')
        ->check(CLI::IsMember({"grid", "mc", "coverage", "lil"}));

    auto* echo = app.add_subcommand("echo", "parse a CSV file and write it back");
    add_common(echo, common);
    echo->add_option("--data", data, "CSV of observations")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (radius->parsed()) return cmd_radius(common, data, b);
        if (stream->parsed()) return cmd_stream(common, data, b, lil);
        if (simulate->parsed()) return cmd_simulate(common, width);
        if (verify->parsed()) return cmd_verify(common, quick, suites);
        if (echo->parsed()) return cmd_echo(common, data);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_code::config;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return exit_code::data;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_code::config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
