#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confseq/errors.hpp"
#include "confseq/scalar_bounds.hpp"
#include "confseq/spaces.hpp"

namespace confseq {

/// One recorded step: the lambda used and |X_i - mean_{i-1}|^2.
struct StepRecord {
    double lambda;
    double increment_sq;
};

/// Running statistics for one stream.
///
/// Keeps sum(lambda_i X_i) and sum(lambda_i) so memory is O(dim) regardless of
/// stream length. Every squared increment is taken against the weighted mean
/// *before* the current observation is folded in, with the mean at t = 0
/// fixed to the zero vector.
class StreamState {
public:
    /// Relative slack on |x| <= B so inputs sitting exactly on the bound survive rounding.
    static constexpr double norm_tolerance = 1e-9;

    static StreamState init(const SpaceSpec& space, const BoundConfig& cfg, bool record_history = false) {
        cfg.validate();
        return StreamState(space, cfg, record_history);
    }

    /// Fold in observation x with predictable weight lambda.
    void update(const Vec& x, double lambda) {
        check_dim(space_, x);
        if (!x.all_finite()) throw DataError("observation " + std::to_string(t_ + 1) + " has a non-finite coordinate");
        if (!(lambda > 0.0 && lambda <= BoundConfig::max_lambda))
            throw UsageError("lambda must lie in (0, 0.8], got " + std::to_string(lambda));
        const double b = cfg_.b_norm_bound;
        const double x_norm = norm(space_, x);
        if (x_norm > b * (1.0 + norm_tolerance))
            throw DataError("observation " + std::to_string(t_ + 1) + " has norm " + std::to_string(x_norm) +
                            " exceeding bound B = " + std::to_string(b));

        const double inc = squared_norm(space_, x - weighted_mean_);
        quad_variation_ += inc;
        penalty_ += psi_e(lambda) * inc;
        if (record_history_) history_.push_back({lambda, inc});

        sum_lambda_ += lambda;
        weighted_sum_.add_scaled(lambda, x);
        weighted_mean_ = (1.0 / sum_lambda_) * weighted_sum_;
        plain_sum_ += x;
        ++t_;
    }

    std::uint64_t t() const noexcept { return t_; }
    double sum_lambda() const noexcept { return sum_lambda_; }
    const Vec& weighted_sum() const noexcept { return weighted_sum_; }
    const Vec& weighted_mean() const noexcept { return weighted_mean_; }
    /// sum(X_i) / t; the zero vector before any observation.
    Vec plain_mean() const { return t_ == 0 ? Vec::zeros(space_.dim()) : (1.0 / static_cast<double>(t_)) * plain_sum_; }
    double quad_variation() const noexcept { return quad_variation_; }
    double penalty() const noexcept { return penalty_; }
    /// (c2 B^2 + V_t) / (t + 1).
    double sigma_hat_sq() const noexcept {
        const double b = cfg_.b_norm_bound;
        return (cfg_.c2 * b * b + quad_variation_) / static_cast<double>(t_ + 1);
    }

    const SpaceSpec& space() const noexcept { return space_; }
    const BoundConfig& config() const noexcept { return cfg_; }
    bool records_history() const noexcept { return record_history_; }
    const std::vector<StepRecord>& history() const noexcept { return history_; }

    friend bool operator==(const StreamState& a, const StreamState& b) {
        return a.t_ == b.t_ && a.sum_lambda_ == b.sum_lambda_ && a.weighted_sum_ == b.weighted_sum_ &&
               a.weighted_mean_ == b.weighted_mean_ && a.plain_sum_ == b.plain_sum_ &&
               a.quad_variation_ == b.quad_variation_ && a.penalty_ == b.penalty_;
    }

private:
    StreamState(const SpaceSpec& space, const BoundConfig& cfg, bool record_history)
        : space_(space),
          cfg_(cfg),
          record_history_(record_history),
          weighted_sum_(Vec::zeros(space.dim())),
          weighted_mean_(Vec::zeros(space.dim())),
          plain_sum_(Vec::zeros(space.dim())) {}

    SpaceSpec space_;
    BoundConfig cfg_;
    bool record_history_;

    std::uint64_t t_ = 0;
    double sum_lambda_ = 0.0;
    Vec weighted_sum_;
    Vec weighted_mean_;
    Vec plain_sum_;
    double quad_variation_ = 0.0;
    double penalty_ = 0.0;
    std::vector<StepRecord> history_;
};

/// Value-style update: returns the state after observing x.
inline StreamState update(StreamState state, const Vec& x, double lambda) {
    state.update(x, lambda);
    return state;
}

}  // namespace confseq
