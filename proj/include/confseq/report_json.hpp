#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "confseq/engine.hpp"
#include "confseq/verification.hpp"

namespace confseq {

// JSON-lines records emitted by `confseq verify`. Every record carries a
// "kind" tag and a boolean "passed".

inline nlohmann::json to_json(const GridReport& r) {
    return {{"kind", "grid"},
            {"name", r.name},
            {"grid", r.grid},
            {"points", r.points},
            {"max_violation", r.max_violation},
            {"worst_point", r.worst_point},
            {"tolerance", r.tolerance},
            {"passed", r.passed}};
}

inline nlohmann::json to_json(const SupermartingaleReport& r) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells)
        cells.push_back({{"t", c.t}, {"lambda", c.lambda}, {"ratio", c.ratio}, {"stderr", c.stderr_}, {"passed", c.passed}});
    return {{"kind", "supermartingale_mc"}, {"dist", r.dist}, {"inner_draws", r.inner_draws}, {"cells", cells}, {"passed", r.passed}};
}

inline nlohmann::json to_json(const CoverageReport& r) {
    return {{"kind", "coverage"},
            {"dist", r.dist},
            {"method", std::string(method_name(r.method))},
            {"horizon", r.horizon},
            {"runs", r.runs},
            {"violations", r.violations},
            {"rate", r.rate},
            {"alpha", r.alpha},
            {"threshold", r.threshold},
            {"passed", r.passed}};
}

inline nlohmann::json to_json(const LilReport& r) {
    return {{"kind", "asymptotic_lil"},
            {"dist", r.dist},
            {"horizon", r.horizon},
            {"skipped", r.skipped},
            {"t0", r.t0},
            {"full_max", r.full_max},
            {"tail_start", r.tail_start},
            {"tail_max", r.tail_max},
            {"threshold", r.threshold},
            {"passed", r.passed}};
}

}  // namespace confseq
