#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "confseq/rng.hpp"
#include "confseq/spaces.hpp"

using namespace confseq;

namespace {

Vec random_vec(CounterRng& rng, std::size_t dim, double scale) {
    Vec v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = rng.uniform(-scale, scale);
    return v;
}

}  // namespace

TEST(SpaceSpec, CanonicalSmoothness) {
    EXPECT_EQ(SpaceSpec::euclidean(3).smoothness_d(), 1.0);
    EXPECT_DOUBLE_EQ(SpaceSpec::lp(3, 4.0).smoothness_d(), std::sqrt(3.0));
    EXPECT_DOUBLE_EQ(SpaceSpec::lp(2, 2.0).smoothness_d(), 1.0);
}

TEST(SpaceSpec, RejectsBadParameters) {
    EXPECT_THROW(SpaceSpec::euclidean(0), UsageError);
    EXPECT_THROW(SpaceSpec::lp(2, 1.5), DomainError);
    EXPECT_THROW(SpaceSpec::with_smoothness(2, EuclideanNorm{}, 0.9), DomainError);
    EXPECT_NO_THROW(SpaceSpec::with_smoothness(2, EuclideanNorm{}, 1.5));
}

TEST(Norm, Examples) {
    EXPECT_DOUBLE_EQ(norm(SpaceSpec::euclidean(2), Vec{3.0, 4.0}), 5.0);
    EXPECT_EQ(norm(SpaceSpec::euclidean(4), Vec::zeros(4)), 0.0);
    EXPECT_EQ(norm(SpaceSpec::lp(4, 3.0), Vec::zeros(4)), 0.0);
    // 2^(1/3), 50-digit reference
    EXPECT_NEAR(norm(SpaceSpec::lp(2, 3.0), Vec{1.0, 1.0}), 1.2599210498948731647672106, 1e-15);
}

TEST(Norm, Errors) {
    EXPECT_THROW(norm(SpaceSpec::euclidean(2), Vec{1.0, 2.0, 3.0}), UsageError);
    EXPECT_THROW(norm(SpaceSpec::euclidean(2), Vec{1.0, NAN}), DataError);
    EXPECT_THROW(norm(SpaceSpec::euclidean(2), Vec{INFINITY, 0.0}), DataError);
}

TEST(Norm, ExtremeMagnitudesDoNotOverflow) {
    EXPECT_DOUBLE_EQ(norm(SpaceSpec::euclidean(2), Vec{3e200, 4e200}), 5e200);
    EXPECT_DOUBLE_EQ(norm(SpaceSpec::lp(2, 4.0), Vec{1e-200, 0.0}), 1e-200);
}

TEST(TwoSmoothGap, Examples) {
    const auto e2 = SpaceSpec::euclidean(2);
    EXPECT_NEAR(two_smooth_gap(e2, Vec{0.3, -1.2}, Vec{2.0, 0.7}), 0.0, 1e-12);
    EXPECT_EQ(two_smooth_gap(e2, Vec::zeros(2), Vec::zeros(2)), 0.0);
    EXPECT_GE(two_smooth_gap(SpaceSpec::lp(2, 4.0), Vec{1.0, 0.0}, Vec{0.0, 1.0}), 0.0);
    EXPECT_THROW(two_smooth_gap(e2, Vec{1.0}, Vec{1.0, 2.0}), UsageError);
}

TEST(TwoSmoothGap, NonnegativeOnRandomPairs) {
    CounterRng rng(11, 0);
    const SpaceSpec spaces[] = {SpaceSpec::euclidean(5), SpaceSpec::lp(5, 3.0), SpaceSpec::lp(3, 4.0), SpaceSpec::lp(7, 10.0)};
    for (const auto& space : spaces) {
        for (int i = 0; i < 10000; ++i) {
            const double scale = std::exp(rng.uniform(-3.0, 3.0));
            const Vec x = random_vec(rng, space.dim(), scale);
            const Vec y = random_vec(rng, space.dim(), scale * rng.uniform());
            ASSERT_GE(two_smooth_gap(space, x, y), -1e-9) << space.describe();
        }
    }
}

TEST(Norm, HomogeneityAndTriangle) {
    CounterRng rng(12, 0);
    const SpaceSpec spaces[] = {SpaceSpec::euclidean(4), SpaceSpec::lp(4, 2.5), SpaceSpec::lp(6, 5.0)};
    for (const auto& space : spaces) {
        for (int i = 0; i < 5000; ++i) {
            const Vec a = random_vec(rng, space.dim(), 10.0);
            const Vec b = random_vec(rng, space.dim(), 10.0);
            const Vec c = random_vec(rng, space.dim(), 10.0);
            const double k = rng.uniform(-100.0, 100.0);
            const double na = norm(space, a);
            ASSERT_NEAR(norm(space, k * a), std::abs(k) * na, 1e-12 * std::abs(k) * na);
            ASSERT_LE(norm(space, a - c), norm(space, a - b) + norm(space, b - c) + 1e-12);
        }
    }
}
