#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "confseq/distributions.hpp"
#include "confseq/engine.hpp"
#include "confseq/errors.hpp"
#include "confseq/harness.hpp"
#include "confseq/scalar_bounds.hpp"
#include "confseq/spaces.hpp"
#include "confseq/tuning.hpp"

namespace confseq {

// ---------------------------------------------------------------------------
// Configuration documents
// ---------------------------------------------------------------------------

struct ExperimentSection {
    DistributionSpec dist = DistributionSpec::uniform_cube(5);
    std::vector<std::uint64_t> n_grid;
    std::uint64_t reps = 100;
    std::vector<Method> methods{Method::Hoeffding, Method::OracleBernstein, Method::EmpiricalBernstein};
    std::optional<double> norm_bound;
    std::vector<std::uint64_t> width_checkpoints;
};

/// Parsed and validated configuration. Fields left unset are filled in by
/// the subcommand (dimension from the data, schedule from the mode, ...).
struct RunConfig {
    std::optional<std::size_t> dim;
    NormKind norm = EuclideanNorm{};
    std::optional<double> smoothness_d;

    std::optional<double> b;
    double alpha = 0.05;
    double c1 = 0.5;
    double c2 = 0.25;

    std::optional<ScheduleKind> schedule;
    std::optional<ExperimentSection> experiment;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;

    /// Space for dimension `dim`. An explicit smoothness_d may only be more
    /// conservative than the canonical constant of the norm.
    SpaceSpec space(std::size_t d) const {
        SpaceSpec canonical = std::holds_alternative<LpNorm>(norm) ? SpaceSpec::lp(d, std::get<LpNorm>(norm).p)
                                                                   : SpaceSpec::euclidean(d);
        if (!smoothness_d) return canonical;
        if (*smoothness_d < canonical.smoothness_d() - 1e-12)
            throw ConfigError("space.smoothness_d is below the norm's smoothness constant " +
                              std::to_string(canonical.smoothness_d()));
        return SpaceSpec::with_smoothness(d, norm, *smoothness_d);
    }

    BoundConfig bound(const SpaceSpec& space) const {
        if (!b) throw ConfigError("bound.b is required (|X| <= b)");
        BoundConfig cfg;
        cfg.b_norm_bound = *b;
        cfg.alpha = alpha;
        cfg.c1 = c1;
        cfg.c2 = c2;
        cfg.smoothness_d = space.smoothness_d();
        cfg.validate();
        return cfg;
    }
};

namespace detail {

/// Typed access to one JSON object that remembers which keys were read, so
/// leftovers can be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const nlohmann::json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string child(const std::string& key) const { return path_ + "." + key; }

    double number(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_number()) fail(child(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(child(key), "must be finite");
        return d;
    }

    std::uint64_t count(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(child(key), "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_string()) fail(child(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<std::uint64_t> counts(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_array()) fail(child(key), "expected an array");
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_integer() || v[i].get<std::int64_t>() < 1)
                fail(child(key) + "[" + std::to_string(i) + "]", "expected a positive integer");
            out.push_back(v[i].get<std::uint64_t>());
        }
        return out;
    }

    void finish() const {
        for (const auto& [key, _] : j_.items())
            if (!seen_.contains(key)) fail(child(key), "unknown key '" + key + "'");
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
        throw ConfigError("config: " + path + ": " + msg);
    }

private:
    const nlohmann::json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline CoordLaw parse_coord(const nlohmann::json& j, const std::string& path) {
    ObjectReader r(j, path);
    const std::string law = r.string("law");
    CoordLaw out;
    if (law == "rademacher") {
        out = RademacherCoord{r.has("scale") ? r.number("scale") : 1.0};
    } else if (law == "uniform") {
        UniformCoord u;
        if (r.has("lo")) u.lo = r.number("lo");
        if (r.has("hi")) u.hi = r.number("hi");
        if (!(u.lo <= u.hi)) ObjectReader::fail(path, "uniform requires lo <= hi");
        out = u;
    } else if (law == "constant") {
        out = ConstantCoord{r.number("value")};
    } else {
        ObjectReader::fail(r.child("law"), "unknown law '" + law + "'");
    }
    r.finish();
    return out;
}

inline DistributionSpec parse_dist(const nlohmann::json& j, const std::string& path) {
    ObjectReader r(j, path);
    const std::string kind = r.string("kind");
    std::optional<double> centered;
    if (r.has("centered_bound")) {
        centered = r.number("centered_bound");
        if (!(*centered > 0.0)) ObjectReader::fail(r.child("centered_bound"), "must be > 0");
    }
    auto dim = [&] {
        const std::uint64_t d = r.count("dim");
        if (d == 0) ObjectReader::fail(r.child("dim"), "must be >= 1");
        return static_cast<std::size_t>(d);
    };
    std::optional<DistributionSpec> out;
    if (kind == "rademacher_cube") {
        out.emplace(RademacherCube{dim()}, centered);
    } else if (kind == "uniform_cube") {
        out.emplace(UniformCube{dim()}, centered);
    } else if (kind == "point_mass") {
        const auto& v = r.raw("value");
        if (!v.is_array() || v.empty()) ObjectReader::fail(r.child("value"), "expected a non-empty array of numbers");
        std::vector<double> coords;
        for (const auto& c : v) {
            if (!c.is_number()) ObjectReader::fail(r.child("value"), "expected numbers");
            coords.push_back(c.get<double>());
        }
        out.emplace(PointMass{Vec(coords)}, centered);
    } else if (kind == "custom") {
        const auto& cs = r.raw("coords");
        if (!cs.is_array() || cs.empty()) ObjectReader::fail(r.child("coords"), "expected a non-empty array");
        std::vector<CoordLaw> laws;
        for (std::size_t i = 0; i < cs.size(); ++i) laws.push_back(parse_coord(cs[i], r.child("coords") + "[" + std::to_string(i) + "]"));
        out.emplace(CustomProduct{laws}, centered);
    } else {
        ObjectReader::fail(r.child("kind"), "unknown distribution kind '" + kind + "'");
    }
    r.finish();
    return *out;
}

}  // namespace detail

/// Parse a JSON configuration document. Every key is optional; unknown keys
/// are rejected with their full path.
///
///   {"space": {"dim", "norm": "euclidean"|"lp", "p", "smoothness_d"},
///    "bound": {"b", "alpha", "c1", "c2"},
///    "schedule": {"kind": "batch_ci"|"sequential_cs"|"fixed", "n", "lambda"},
///    "experiment": {"dist", "n_grid", "reps", "methods", "norm_bound", "width_checkpoints"},
///    "seed", "output"}
inline RunConfig parse_config(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    using detail::ObjectReader;
    ObjectReader top(doc, "$");
    RunConfig cfg;

    if (top.has("space")) {
        ObjectReader s(top.raw("space"), "$.space");
        if (s.has("dim")) {
            const auto d = s.count("dim");
            if (d == 0) ObjectReader::fail("$.space.dim", "must be >= 1");
            cfg.dim = static_cast<std::size_t>(d);
        }
        if (s.has("norm")) {
            const std::string n = s.string("norm");
            if (n == "euclidean") {
                cfg.norm = EuclideanNorm{};
            } else if (n == "lp") {
                if (!s.has("p")) ObjectReader::fail("$.space.p", "required when norm is 'lp'");
                const double p = s.number("p");
                if (!(p >= 2.0)) ObjectReader::fail("$.space.p", "must be >= 2");
                cfg.norm = LpNorm{p};
            } else {
                ObjectReader::fail("$.space.norm", "unknown norm '" + n + "'");
            }
        }
        if (s.has("smoothness_d")) {
            const double d = s.number("smoothness_d");
            if (!(d >= 1.0)) ObjectReader::fail("$.space.smoothness_d", "must be >= 1");
            cfg.smoothness_d = d;
        }
        s.finish();
    }

    if (top.has("bound")) {
        ObjectReader b(top.raw("bound"), "$.bound");
        if (b.has("b")) {
            cfg.b = b.number("b");
            if (!(*cfg.b > 0.0)) ObjectReader::fail("$.bound.b", "must be > 0");
        }
        if (b.has("alpha")) cfg.alpha = b.number("alpha");
        if (b.has("c1")) cfg.c1 = b.number("c1");
        if (b.has("c2")) cfg.c2 = b.number("c2");
        b.finish();
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) ObjectReader::fail("$.bound.alpha", "must lie in (0, 1)");
    if (!(cfg.c1 > 0.0 && cfg.c1 <= BoundConfig::max_lambda)) ObjectReader::fail("$.bound.c1", "must lie in (0, 0.8]");
    if (!(cfg.c2 >= 0.0 && cfg.c2 <= 1.0)) ObjectReader::fail("$.bound.c2", "must lie in [0, 1]");

    if (top.has("schedule")) {
        ObjectReader s(top.raw("schedule"), "$.schedule");
        const std::string kind = s.string("kind");
        if (kind == "batch_ci") {
            const auto n = s.has("n") ? s.count("n") : 0;
            cfg.schedule = BatchCI{n};
        } else if (kind == "sequential_cs") {
            cfg.schedule = SequentialCS{};
        } else if (kind == "fixed") {
            const double l = s.number("lambda");
            if (!(l > 0.0 && l <= BoundConfig::max_lambda)) ObjectReader::fail("$.schedule.lambda", "must lie in (0, 0.8]");
            cfg.schedule = FixedLambda{l};
        } else {
            ObjectReader::fail("$.schedule.kind", "unknown schedule '" + kind + "'");
        }
        s.finish();
    }

    if (top.has("experiment")) {
        ObjectReader e(top.raw("experiment"), "$.experiment");
        ExperimentSection ex;
        if (e.has("dist")) ex.dist = detail::parse_dist(e.raw("dist"), "$.experiment.dist");
        if (e.has("n_grid")) {
            ex.n_grid = e.counts("n_grid");
            for (std::size_t i = 1; i < ex.n_grid.size(); ++i)
                if (ex.n_grid[i] <= ex.n_grid[i - 1]) ObjectReader::fail("$.experiment.n_grid", "must be strictly increasing");
        }
        if (e.has("reps")) {
            ex.reps = e.count("reps");
            if (ex.reps == 0) ObjectReader::fail("$.experiment.reps", "must be >= 1");
        }
        if (e.has("methods")) {
            const auto& ms = e.raw("methods");
            if (!ms.is_array() || ms.empty()) ObjectReader::fail("$.experiment.methods", "expected a non-empty array");
            ex.methods.clear();
            for (const auto& m : ms) {
                if (!m.is_string()) ObjectReader::fail("$.experiment.methods", "expected method names");
                const Method parsed = parse_method(m.get<std::string>());
                if (parsed == Method::FiniteLIL) ObjectReader::fail("$.experiment.methods", "FiniteLIL is not a radius-experiment method");
                ex.methods.push_back(parsed);
            }
        }
        if (e.has("norm_bound")) {
            ex.norm_bound = e.number("norm_bound");
            if (!(*ex.norm_bound > 0.0)) ObjectReader::fail("$.experiment.norm_bound", "must be > 0");
        }
        if (e.has("width_checkpoints")) ex.width_checkpoints = e.counts("width_checkpoints");
        e.finish();
        cfg.experiment = ex;
    }

    if (top.has("seed")) cfg.seed = top.count("seed");
    if (top.has("output")) cfg.output = top.string("output");
    top.finish();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

// ---------------------------------------------------------------------------
// CSV observation streams
// ---------------------------------------------------------------------------

/// Reads one vector per line of comma-separated numbers. A first line of the
/// form `x1,...,xd` is taken as a header. Blank lines are skipped. The
/// dimension is fixed by the caller or by the first data row.
class CsvVectorReader {
public:
    explicit CsvVectorReader(std::istream& in, std::optional<std::size_t> dim = std::nullopt) : in_(in), dim_(dim) {}

    std::optional<Vec> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
            const std::vector<std::string_view> fields = split(line);
            if (!seen_row_ && is_header(fields)) {
                seen_row_ = true;
                continue;
            }
            seen_row_ = true;
            if (!dim_) dim_ = fields.size();
            if (fields.size() != *dim_)
                throw DataError("line " + std::to_string(line_no_) + ": expected " + std::to_string(*dim_) + " fields, got " +
                                std::to_string(fields.size()));
            Vec v(fields.size());
            for (std::size_t i = 0; i < fields.size(); ++i) v[i] = parse_field(fields[i], i);
            return v;
        }
        return std::nullopt;
    }

    std::size_t line() const noexcept { return line_no_; }
    std::optional<std::size_t> dim() const noexcept { return dim_; }

private:
    static std::string_view trim(std::string_view s) {
        const auto b = s.find_first_not_of(" \t");
        if (b == std::string_view::npos) return {};
        const auto e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    }

    static std::vector<std::string_view> split(std::string_view line) {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return out;
    }

    bool is_header(const std::vector<std::string_view>& fields) const {
        if (dim_ && fields.size() != *dim_) return false;
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (fields[i] != "x" + std::to_string(i + 1)) return false;
        return true;
    }

    double parse_field(std::string_view f, std::size_t col) const {
        double value = 0.0;
        const char* end = f.data() + f.size();
        if (!f.empty() && f.front() == '+') f.remove_prefix(1);
        const auto [ptr, ec] = std::from_chars(f.data(), end, value);
        if (f.empty() || ec != std::errc() || ptr != end)
            throw DataError("line " + std::to_string(line_no_) + ", field " + std::to_string(col + 1) + ": '" +
                            std::string(f) + "' is not a number");
        if (!std::isfinite(value))
            throw DataError("line " + std::to_string(line_no_) + ", field " + std::to_string(col + 1) + ": non-finite value");
        return value;
    }

    std::istream& in_;
    std::optional<std::size_t> dim_;
    std::size_t line_no_ = 0;
    bool seen_row_ = false;
};

/// All vectors of a CSV file, in file order.
inline std::vector<Vec> stream_from_csv(const std::string& path, std::optional<std::size_t> dim = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file '" + path + "'");
    CsvVectorReader reader(in, dim);
    std::vector<Vec> out;
    while (auto v = reader.next()) out.push_back(std::move(*v));
    return out;
}

inline std::vector<Vec> stream_from_csv(const std::string& path, const SpaceSpec& space) {
    return stream_from_csv(path, std::optional<std::size_t>(space.dim()));
}

/// Writes vectors with a `x1,...,xd` header and 17 significant digits, which
/// re-parses to the identical doubles.
inline void write_vectors_csv(std::ostream& out, const std::vector<Vec>& rows) {
    if (rows.empty()) return;
    const std::size_t d = rows.front().size();
    for (std::size_t i = 0; i < d; ++i) out << (i ? "," : "") << 'x' << i + 1;
    out << '\n' << std::setprecision(17);
    for (const Vec& v : rows) {
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// JSON output
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const ConfidenceBall& b) {
    return {{"t", b.t}, {"center", b.center.to_vector()}, {"radius", b.radius}, {"method", std::string(method_name(b.method))}};
}

}  // namespace confseq
