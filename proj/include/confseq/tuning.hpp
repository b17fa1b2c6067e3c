#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <variant>

#include "confseq/errors.hpp"
#include "confseq/scalar_bounds.hpp"

namespace confseq {

/// Fixed sample size n known up front.
struct BatchCI {
    std::uint64_t n;
};

/// Open-ended stream; adds a log(1 + t) factor to the denominator.
struct SequentialCS {};

struct FixedLambda {
    double lambda;
};

using ScheduleKind = std::variant<BatchCI, SequentialCS, FixedLambda>;

/// Predictable lambda schedule. next_lambda() for step t must only ever see
/// statistics computed from X_1..X_{t-1}.
class Schedule {
public:
    Schedule(ScheduleKind kind, const BoundConfig& cfg) : kind_(kind), cfg_(cfg) {
        cfg_.validate();
        if (const auto* b = std::get_if<BatchCI>(&kind_); b && b->n == 0) throw UsageError("BatchCI requires n >= 1");
        if (const auto* f = std::get_if<FixedLambda>(&kind_);
            f && !(f->lambda > 0.0 && f->lambda <= BoundConfig::max_lambda))
            throw UsageError("fixed lambda must lie in (0, 0.8], got " + std::to_string(f->lambda));
    }

    static Schedule batch(std::uint64_t n, const BoundConfig& cfg) { return {BatchCI{n}, cfg}; }
    static Schedule sequential(const BoundConfig& cfg) { return {SequentialCS{}, cfg}; }
    static Schedule fixed(double lambda, const BoundConfig& cfg) { return {FixedLambda{lambda}, cfg}; }

    const ScheduleKind& kind() const noexcept { return kind_; }
    const BoundConfig& config() const noexcept { return cfg_; }

    std::string name() const {
        if (std::holds_alternative<BatchCI>(kind_)) return "batch_ci";
        if (std::holds_alternative<SequentialCS>(kind_)) return "sequential_cs";
        return "fixed";
    }

private:
    ScheduleKind kind_;
    BoundConfig cfg_;
};

/// Lambda for step t (t >= 1) given sigma_hat^2_{t-1}.
///
///   BatchCI(n):   min(sqrt(2 (4B)^2 log(2/alpha) / (sigma^2 n)), c1)
///   SequentialCS: min(sqrt(2 (4B)^2 log(2/alpha) / (sigma^2 t log(1 + t))), c1)
///   Fixed:        the constant
inline double next_lambda(const Schedule& s, std::uint64_t t, double sigma_hat_sq_prev) {
    if (t == 0) throw UsageError("next_lambda: steps are numbered from 1");
    if (!(sigma_hat_sq_prev > 0.0)) throw DomainError("next_lambda requires sigma_hat^2 > 0, got " + std::to_string(sigma_hat_sq_prev));

    const BoundConfig& cfg = s.config();
    const double four_b = 4.0 * cfg.b_norm_bound;
    const double numer = 2.0 * four_b * four_b * cfg.log_two_over_alpha();

    return std::visit(
        [&](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FixedLambda>) {
                return k.lambda;
            } else if constexpr (std::is_same_v<K, BatchCI>) {
                return std::min(std::sqrt(numer / (sigma_hat_sq_prev * static_cast<double>(k.n))), cfg.c1);
            } else {
                const double td = static_cast<double>(t);
                return std::min(std::sqrt(numer / (sigma_hat_sq_prev * td * std::log1p(td))), cfg.c1);
            }
        },
        s.kind());
}

}  // namespace confseq
