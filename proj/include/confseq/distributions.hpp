#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "confseq/errors.hpp"
#include "confseq/rng.hpp"
#include "confseq/spaces.hpp"

namespace confseq {

// Per-coordinate laws for custom product distributions.
struct RademacherCoord {
    double scale = 1.0;  // +-scale
};
struct UniformCoord {
    double lo = -1.0;
    double hi = 1.0;
};
struct ConstantCoord {
    double value = 0.0;
};
using CoordLaw = std::variant<RademacherCoord, UniformCoord, ConstantCoord>;

struct RademacherCube {
    std::size_t dim;
};
struct UniformCube {
    std::size_t dim;
};
struct PointMass {
    Vec value;
};
struct CustomProduct {
    std::vector<CoordLaw> coords;
};
using DistributionKind = std::variant<RademacherCube, UniformCube, PointMass, CustomProduct>;

/// Product distribution on R^d with independent coordinates.
///
/// Derived moments are with respect to the Euclidean norm: true_sigma_sq is
/// E|X - mu|_2^2 and norm_bound is the smallest B with |X|_2 <= B surely.
class DistributionSpec {
public:
    explicit DistributionSpec(DistributionKind kind, std::optional<double> centered_bound = std::nullopt)
        : coords_(expand(kind)), kind_(std::move(kind)), centered_bound_(centered_bound) {
        if (coords_.empty()) throw ConfigError("distribution must have dimension >= 1");
        for (const auto& c : coords_)
            if (const auto* u = std::get_if<UniformCoord>(&c); u && !(u->lo <= u->hi))
                throw ConfigError("uniform coordinate requires lo <= hi");
        if (centered_bound_ && !(*centered_bound_ > 0.0)) throw ConfigError("centered_bound must be > 0");
    }

    static DistributionSpec rademacher_cube(std::size_t d) { return DistributionSpec(RademacherCube{d}); }
    static DistributionSpec uniform_cube(std::size_t d) { return DistributionSpec(UniformCube{d}); }
    static DistributionSpec point_mass(Vec v) { return DistributionSpec(PointMass{std::move(v)}); }

    std::size_t dim() const noexcept { return coords_.size(); }
    const DistributionKind& kind() const noexcept { return kind_; }

    Vec true_mu() const {
        Vec mu(dim());
        for (std::size_t i = 0; i < dim(); ++i) mu[i] = coord_mean(coords_[i]);
        return mu;
    }

    double true_sigma_sq() const {
        double acc = 0.0;
        for (const auto& c : coords_) acc += coord_variance(c);
        return acc;
    }

    double norm_bound() const {
        double acc = 0.0;
        for (const auto& c : coords_) {
            const double m = coord_abs_max(c);
            acc += m * m;
        }
        return std::sqrt(acc);
    }

    /// Bound on |X - mu| for the comparator radii. Equals norm_bound() for
    /// distributions centred at zero; anything else must supply it explicitly.
    double centered_bound() const {
        if (centered_bound_) return *centered_bound_;
        if (norm(SpaceSpec::euclidean(dim()), true_mu()) == 0.0) return norm_bound();
        throw ConfigError("distribution is not centred at zero; supply centered_bound explicitly");
    }

    Vec sample(CounterRng& rng) const {
        Vec x(dim());
        for (std::size_t i = 0; i < dim(); ++i) x[i] = draw(coords_[i], rng);
        return x;
    }

    std::string describe() const {
        return std::visit(
            [&](const auto& k) -> std::string {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, RademacherCube>) return "rademacher_cube(" + std::to_string(k.dim) + ")";
                else if constexpr (std::is_same_v<K, UniformCube>) return "uniform_cube(" + std::to_string(k.dim) + ")";
                else if constexpr (std::is_same_v<K, PointMass>) return "point_mass(" + std::to_string(k.value.size()) + ")";
                else return "custom(" + std::to_string(k.coords.size()) + ")";
            },
            kind_);
    }

private:
    static std::vector<CoordLaw> expand(const DistributionKind& kind) {
        return std::visit(
            [](const auto& k) -> std::vector<CoordLaw> {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, RademacherCube>) return std::vector<CoordLaw>(k.dim, RademacherCoord{1.0});
                else if constexpr (std::is_same_v<K, UniformCube>) return std::vector<CoordLaw>(k.dim, UniformCoord{-1.0, 1.0});
                else if constexpr (std::is_same_v<K, PointMass>) {
                    std::vector<CoordLaw> out;
                    for (double v : k.value.coords()) out.push_back(ConstantCoord{v});
                    return out;
                } else
                    return k.coords;
            },
            kind);
    }

    static double coord_mean(const CoordLaw& c) {
        if (const auto* u = std::get_if<UniformCoord>(&c)) return 0.5 * (u->lo + u->hi);
        if (const auto* k = std::get_if<ConstantCoord>(&c)) return k->value;
        return 0.0;
    }
    static double coord_variance(const CoordLaw& c) {
        if (const auto* r = std::get_if<RademacherCoord>(&c)) return r->scale * r->scale;
        if (const auto* u = std::get_if<UniformCoord>(&c)) return (u->hi - u->lo) * (u->hi - u->lo) / 12.0;
        return 0.0;
    }
    static double coord_abs_max(const CoordLaw& c) {
        if (const auto* r = std::get_if<RademacherCoord>(&c)) return std::abs(r->scale);
        if (const auto* u = std::get_if<UniformCoord>(&c)) return std::max(std::abs(u->lo), std::abs(u->hi));
        return std::abs(std::get<ConstantCoord>(c).value);
    }
    static double draw(const CoordLaw& c, CounterRng& rng) {
        if (const auto* r = std::get_if<RademacherCoord>(&c)) return r->scale * rng.rademacher();
        if (const auto* u = std::get_if<UniformCoord>(&c)) return rng.uniform(u->lo, u->hi);
        return std::get<ConstantCoord>(c).value;
    }

    std::vector<CoordLaw> coords_;
    DistributionKind kind_;
    std::optional<double> centered_bound_;
};

}  // namespace confseq
