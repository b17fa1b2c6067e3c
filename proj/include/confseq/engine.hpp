#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confseq/errors.hpp"
#include "confseq/estimators.hpp"
#include "confseq/scalar_bounds.hpp"
#include "confseq/spaces.hpp"
#include "confseq/tuning.hpp"

namespace confseq {

enum class Method { EmpiricalBernstein, FiniteLIL, Hoeffding, OracleBernstein };

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::EmpiricalBernstein: return "EmpiricalBernstein";
        case Method::FiniteLIL: return "FiniteLIL";
        case Method::Hoeffding: return "Hoeffding";
        case Method::OracleBernstein: return "OracleBernstein";
    }
    return "unknown";
}

inline Method parse_method(std::string_view s) {
    for (Method m : {Method::EmpiricalBernstein, Method::FiniteLIL, Method::Hoeffding, Method::OracleBernstein})
        if (method_name(m) == s) return m;
    throw ConfigError("unknown method '" + std::string(s) + "'");
}

struct ConfidenceBall {
    std::uint64_t t = 0;
    Vec center;
    double radius = 0.0;
    Method method = Method::EmpiricalBernstein;
};

/// Closed ball membership: |candidate - center| <= radius.
inline bool contains(const SpaceSpec& space, const ConfidenceBall& ball, const Vec& candidate) {
    check_dim(space, candidate);
    return norm(space, candidate - ball.center) <= ball.radius;
}

/// Numerator-over-denominator form of the empirical Bernstein radius:
/// D * (penalty / (4B) + 4B log(2/alpha)) / sum(lambda).
inline double empirical_bernstein_radius(double penalty, double sum_lambda, const BoundConfig& cfg) {
    const double four_b = 4.0 * cfg.b_norm_bound;
    return cfg.smoothness_d * (penalty / four_b + four_b * cfg.log_two_over_alpha()) / sum_lambda;
}

/// Streaming confidence sequence for the mean of bounded vectors.
///
/// observe() draws lambda_t from the schedule using sigma_hat^2_{t-1} (the state
/// before X_t is folded in), updates the running statistics, and returns the
/// ball centred at the lambda-weighted mean. The guarantee holds for all t
/// simultaneously at level 1 - alpha.
class Engine {
public:
    using WarningSink = std::function<void(const std::string&)>;
    /// Called with (t, sigma_hat^2 handed to the schedule, observations already folded in).
    using LambdaProbe = std::function<void(std::uint64_t, double, std::uint64_t)>;

    static constexpr double min_lambda = 1e-12;

    Engine(const SpaceSpec& space, const BoundConfig& cfg, const Schedule& schedule, bool record_history = false)
        : space_(space), cfg_(cfg), schedule_(schedule), state_(StreamState::init(space, cfg, record_history)) {
        if (std::abs(cfg.smoothness_d - space.smoothness_d()) > 1e-12)
            throw ConfigError("BoundConfig.smoothness_d (" + std::to_string(cfg.smoothness_d) +
                              ") does not match the space's D (" + std::to_string(space.smoothness_d()) + ")");
    }

    ConfidenceBall observe(const Vec& x) {
        const std::uint64_t t = state_.t() + 1;
        const double sigma_prev = state_.sigma_hat_sq();
        if (probe_) probe_(t, sigma_prev, state_.t());
        double lambda = next_lambda(schedule_, t, sigma_prev);
        if (lambda < min_lambda) {
            ++clamped_steps_;
            warn("lambda underflow at t = " + std::to_string(t) + " (" + std::to_string(lambda) + "), clamped to 1e-12");
            lambda = min_lambda;
        }
        state_.update(x, lambda);
        last_lambda_ = lambda;
        return ball();
    }

    /// Empirical Bernstein ball at the current t.
    ConfidenceBall ball() const {
        if (state_.t() == 0) throw UsageError("no observations yet");
        return {state_.t(), state_.weighted_mean(),
                empirical_bernstein_radius(state_.penalty(), state_.sum_lambda(), cfg_), Method::EmpiricalBernstein};
    }

    /// Stitched LIL ball around the plain mean. Only defined for alpha = 0.05, B = 1/4.
    ConfidenceBall lil_ball() const {
        if (!supports_finite_lil(cfg_))
            throw ConfigError("finite LIL ball requires alpha = 0.05 and B = 0.25, got alpha = " +
                              std::to_string(cfg_.alpha) + ", B = " + std::to_string(cfg_.b_norm_bound));
        if (state_.t() == 0) throw UsageError("no observations yet");
        return {state_.t(), state_.plain_mean(),
                finite_lil_radius(state_.quad_variation(), state_.t(), space_.smoothness_d()), Method::FiniteLIL};
    }

    bool contains(const ConfidenceBall& b, const Vec& candidate) const { return confseq::contains(space_, b, candidate); }

    const StreamState& state() const noexcept { return state_; }
    const SpaceSpec& space() const noexcept { return space_; }
    const BoundConfig& config() const noexcept { return cfg_; }
    const Schedule& schedule() const noexcept { return schedule_; }
    double last_lambda() const noexcept { return last_lambda_; }
    std::uint64_t clamped_steps() const noexcept { return clamped_steps_; }

    void set_warning_sink(WarningSink sink) { warn_ = std::move(sink); }
    void set_lambda_probe(LambdaProbe probe) { probe_ = std::move(probe); }

private:
    void warn(const std::string& msg) const {
        if (warn_) warn_(msg);
    }

    SpaceSpec space_;
    BoundConfig cfg_;
    Schedule schedule_;
    StreamState state_;
    double last_lambda_ = 0.0;
    std::uint64_t clamped_steps_ = 0;
    WarningSink warn_ = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    LambdaProbe probe_;
};

/// Fixed-n ball: streams the samples with the batch schedule tuned to n = samples.size().
/// The result depends on sample order, since each increment uses the previous weighted mean.
inline ConfidenceBall batch_confidence_ball(std::span<const Vec> samples, const BoundConfig& cfg, const SpaceSpec& space) {
    if (samples.empty()) throw UsageError("batch_confidence_ball needs at least one sample");
    Engine engine(space, cfg, Schedule::batch(samples.size(), cfg));
    for (const Vec& x : samples) engine.observe(x);
    return engine.ball();
}

}  // namespace confseq
