#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "confseq/errors.hpp"

namespace confseq {

/// A coordinate vector in a finite-dimensional space.
class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t dim) : coords_(dim, 0.0) {}
    explicit Vec(std::vector<double> coords) : coords_(std::move(coords)) {}
    Vec(std::initializer_list<double> coords) : coords_(coords) {}

    static Vec zeros(std::size_t dim) { return Vec(dim); }

    std::size_t size() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    double& operator[](std::size_t i) { return coords_[i]; }

    std::span<const double> coords() const noexcept { return coords_; }
    std::span<double> coords() noexcept { return coords_; }
    const std::vector<double>& to_vector() const noexcept { return coords_; }

    bool all_finite() const noexcept {
        return std::all_of(coords_.begin(), coords_.end(), [](double c) { return std::isfinite(c); });
    }

    Vec& operator+=(const Vec& o) {
        check_same_dim(o);
        for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        check_same_dim(o);
        for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
        return *this;
    }
    Vec& operator*=(double c) noexcept {
        for (double& x : coords_) x *= c;
        return *this;
    }

    /// this += c * o
    void add_scaled(double c, const Vec& o) {
        check_same_dim(o);
        for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += c * o.coords_[i];
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double c, Vec v) { return v *= c; }
    friend Vec operator*(Vec v, double c) { return v *= c; }
    friend bool operator==(const Vec&, const Vec&) = default;

private:
    void check_same_dim(const Vec& o) const {
        if (o.size() != size())
            throw UsageError("dimension mismatch: " + std::to_string(size()) + " vs " + std::to_string(o.size()));
    }

    std::vector<double> coords_;
};

struct EuclideanNorm {};

struct LpNorm {
    double p;
};

using NormKind = std::variant<EuclideanNorm, LpNorm>;

/// Ambient space: dimension, norm, and the (2, D)-smoothness constant D.
///
/// D is stored rather than derived so a caller can supply a conservative value
/// for a norm that is only known to be smooth up to some constant. The named
/// constructors set the canonical D (1 for Euclidean, sqrt(p - 1) for L^p).
class SpaceSpec {
public:
    static SpaceSpec euclidean(std::size_t dim) { return SpaceSpec(dim, EuclideanNorm{}, 1.0); }

    static SpaceSpec lp(std::size_t dim, double p) {
        if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("L^p norm requires finite p >= 2, got " + std::to_string(p));
        return SpaceSpec(dim, LpNorm{p}, std::sqrt(p - 1.0));
    }

    /// Norm with an explicitly supplied smoothness constant.
    static SpaceSpec with_smoothness(std::size_t dim, NormKind norm, double smoothness_d) {
        if (const auto* lp = std::get_if<LpNorm>(&norm); lp && !(lp->p >= 2.0))
            throw DomainError("L^p norm requires p >= 2");
        if (!(smoothness_d >= 1.0) || !std::isfinite(smoothness_d))
            throw DomainError("smoothness constant D must be >= 1, got " + std::to_string(smoothness_d));
        return SpaceSpec(dim, norm, smoothness_d);
    }

    std::size_t dim() const noexcept { return dim_; }
    const NormKind& norm_kind() const noexcept { return norm_; }
    double smoothness_d() const noexcept { return smoothness_d_; }

    /// Exponent of the norm; 2 for Euclidean.
    double p() const noexcept {
        if (const auto* lp = std::get_if<LpNorm>(&norm_)) return lp->p;
        return 2.0;
    }

    std::string describe() const {
        if (std::holds_alternative<EuclideanNorm>(norm_)) return "euclidean(" + std::to_string(dim_) + ")";
        return "lp(" + std::to_string(dim_) + ", p=" + std::to_string(p()) + ")";
    }

private:
    SpaceSpec(std::size_t dim, NormKind norm, double d) : dim_(dim), norm_(norm), smoothness_d_(d) {
        if (dim_ == 0) throw UsageError("space dimension must be >= 1");
    }

    std::size_t dim_;
    NormKind norm_;
    double smoothness_d_;
};

inline void check_dim(const SpaceSpec& space, const Vec& v) {
    if (v.size() != space.dim())
        throw UsageError("vector has dimension " + std::to_string(v.size()) + ", space has " +
                         std::to_string(space.dim()));
}

/// (sum |v_i|^p)^(1/p). Coordinates are rescaled by max |v_i| first so large
/// or tiny entries do not overflow in the power.
inline double norm(const SpaceSpec& space, const Vec& v) {
    check_dim(space, v);
    if (!v.all_finite()) throw DataError("non-finite coordinate in vector");

    double scale = 0.0;
    for (double c : v.coords()) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;

    if (std::holds_alternative<EuclideanNorm>(space.norm_kind())) {
        double acc = 0.0;
        for (double c : v.coords()) {
            const double r = c / scale;
            acc += r * r;
        }
        return scale * std::sqrt(acc);
    }
    const double p = space.p();
    double acc = 0.0;
    for (double c : v.coords()) acc += std::pow(std::abs(c) / scale, p);
    return scale * std::pow(acc, 1.0 / p);
}

inline double squared_norm(const SpaceSpec& space, const Vec& v) {
    const double n = norm(space, v);
    return n * n;
}

/// 2|x|^2 + 2 D^2 |y|^2 - |x + y|^2 - |x - y|^2. Nonnegative on a (2, D)-smooth space.
inline double two_smooth_gap(const SpaceSpec& space, const Vec& x, const Vec& y) {
    check_dim(space, x);
    check_dim(space, y);
    const double d = space.smoothness_d();
    return 2.0 * squared_norm(space, x) + 2.0 * d * d * squared_norm(space, y) - squared_norm(space, x + y) -
           squared_norm(space, x - y);
}

}  // namespace confseq
