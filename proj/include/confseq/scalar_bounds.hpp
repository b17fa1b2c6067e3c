#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "confseq/errors.hpp"

namespace confseq {

/// Parameters shared by every radius in the library.
///
/// `b_norm_bound` is B with |X_t| <= B. `c1` caps the tuned lambda and must not
/// exceed 0.8, the largest lambda the supermartingale construction admits.
/// `c2` seeds the variance estimate at t = 0 with c2 * B^2.
struct BoundConfig {
    double b_norm_bound = 1.0;
    double alpha = 0.05;
    double smoothness_d = 1.0;
    double c1 = 0.5;
    double c2 = 0.25;

    static constexpr double max_lambda = 0.8;

    /// Throws ConfigError naming the first offending field.
    void validate() const {
        if (!(b_norm_bound > 0.0) || !std::isfinite(b_norm_bound))
            throw ConfigError("b_norm_bound must be finite and > 0, got " + std::to_string(b_norm_bound));
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1), got " + std::to_string(alpha));
        if (!(smoothness_d >= 1.0) || !std::isfinite(smoothness_d))
            throw ConfigError("smoothness_d must be >= 1, got " + std::to_string(smoothness_d));
        if (!(c1 > 0.0 && c1 <= max_lambda)) throw ConfigError("c1 must lie in (0, 0.8], got " + std::to_string(c1));
        if (!(c2 >= 0.0 && c2 <= 1.0)) throw ConfigError("c2 must lie in [0, 1], got " + std::to_string(c2));
    }

    double log_two_over_alpha() const { return std::log(2.0 / alpha); }
};

/// -log(1 - lambda) - lambda for any real type with ADL log (double, long double,
/// boost::multiprecision). No domain checks.
template <class Real>
Real psi_e_unchecked(const Real& lambda) {
    using std::log;
    return -log(Real(1) - lambda) - lambda;
}

/// psi_E(lambda) = -log(1 - lambda) - lambda on [0, 1).
///
/// Below 0.25 the power series sum_{k>=2} lambda^k / k is summed smallest term
/// first; the closed form loses relative accuracy there to cancellation.
inline double psi_e(double lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("psi_e requires 0 <= lambda < 1, got " + std::to_string(lambda));
    if (lambda >= 0.25) return -std::log1p(-lambda) - lambda;

    constexpr int terms = 40;
    double powers[terms + 1];
    powers[0] = 1.0;
    for (int k = 1; k <= terms; ++k) powers[k] = powers[k - 1] * lambda;
    double acc = 0.0;
    for (int k = terms; k >= 2; --k) acc += powers[k] / k;
    return acc;
}

/// psi_{E,c}(lambda) = psi_E(c * lambda) / c^2, defined for lambda in [0, 1/c).
inline double psi_e_scaled(double lambda, double c) {
    if (!(c > 0.0)) throw DomainError("psi_e_scaled requires c > 0");
    return psi_e(c * lambda) / (c * c);
}

/// Hoeffding-type radius for the sample mean of n observations with
/// |X - mu| <= centered_bound: D * centered_bound * sqrt(2 log(2/alpha) / n).
inline double hoeffding_mean_radius(std::uint64_t n, const BoundConfig& cfg, double centered_bound) {
    cfg.validate();
    if (n == 0) throw UsageError("hoeffding_mean_radius requires n >= 1");
    if (!(centered_bound > 0.0)) throw DomainError("centered_bound must be > 0");
    return cfg.smoothness_d * centered_bound * std::sqrt(2.0 * cfg.log_two_over_alpha() / static_cast<double>(n));
}

/// Bernstein-type radius with known variance sigma_sq = E|X - mu|^2.
///
/// Uses the upper bound sqrt(2 V log(2/alpha)) + (2/3) B log(2/alpha) on the
/// exact root, with V = n D^2 sigma^2, divided by n.
inline double bernstein_mean_radius(std::uint64_t n, double sigma_sq, const BoundConfig& cfg, double centered_bound) {
    cfg.validate();
    if (n == 0) throw UsageError("bernstein_mean_radius requires n >= 1");
    if (!(sigma_sq >= 0.0)) throw DomainError("sigma_sq must be >= 0, got " + std::to_string(sigma_sq));
    if (!(centered_bound > 0.0)) throw DomainError("centered_bound must be > 0");
    const double nd = static_cast<double>(n);
    const double log_term = cfg.log_two_over_alpha();
    const double d = cfg.smoothness_d;
    const double v = nd * d * d * sigma_sq;
    return (std::sqrt(2.0 * v * log_term) + (2.0 / 3.0) * centered_bound * log_term) / nd;
}

/// Limit of sqrt(n) * radius for the tuned batch ball: sigma * D * sqrt(2 log(2/alpha)).
inline double limiting_width(double sigma, const BoundConfig& cfg) {
    if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
    return sigma * cfg.smoothness_d * std::sqrt(2.0 * cfg.log_two_over_alpha());
}

namespace finite_lil {
// Stitched boundary constants; valid only for alpha = 0.05 and B = 1/4.
inline constexpr double alpha = 0.05;
inline constexpr double norm_bound = 0.25;
inline constexpr double sqrt_coef = 1.7;
inline constexpr double sqrt_shift = 3.8;
inline constexpr double loglog_coef = 3.4;
inline constexpr double offset = 13.0;
}  // namespace finite_lil

/// Closed-form stitched LIL radius around the plain mean at time t.
///
/// D * [1.7 sqrt(v (loglog(2v) + 3.8)) + 3.4 loglog(2v) + 13] / t with v = max(v_t, 1).
/// Only a 95% confidence sequence when |X_t| <= 1/4; the caller enforces that.
inline double finite_lil_radius(double v_t, std::uint64_t t, double smoothness_d) {
    if (t == 0) throw DomainError("finite_lil_radius requires t >= 1");
    if (!(v_t >= 0.0)) throw DomainError("variance process must be >= 0");
    if (!(smoothness_d >= 1.0)) throw DomainError("smoothness_d must be >= 1");
    const double v = std::max(v_t, 1.0);
    const double ll = std::log(std::log(2.0 * v));
    const double numer = finite_lil::sqrt_coef * std::sqrt(v * (ll + finite_lil::sqrt_shift)) +
                         finite_lil::loglog_coef * ll + finite_lil::offset;
    return smoothness_d * numer / static_cast<double>(t);
}

/// True when cfg matches the only (alpha, B) pair the finite LIL radius supports.
inline bool supports_finite_lil(const BoundConfig& cfg) {
    return std::abs(cfg.alpha - finite_lil::alpha) <= 1e-12 && std::abs(cfg.b_norm_bound - finite_lil::norm_bound) <= 1e-12;
}

}  // namespace confseq
