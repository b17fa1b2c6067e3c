#include <cmath>

#include <gtest/gtest.h>

#include "confseq/rng.hpp"
#include "confseq/tuning.hpp"

using namespace confseq;

namespace {

BoundConfig cfg_with(double b, double alpha = 0.05, double c1 = 0.5) {
    BoundConfig cfg;
    cfg.b_norm_bound = b;
    cfg.alpha = alpha;
    cfg.c1 = c1;
    return cfg;
}

}  // namespace

TEST(Schedule, BatchClampsToC1) {
    // unclamped value sqrt(32 log 40 / 100) = 1.0864812125924955988 (mpmath)
    const auto cfg = cfg_with(1.0);
    EXPECT_EQ(next_lambda(Schedule::batch(100, cfg), 1, 1.0), 0.5);
    EXPECT_NEAR(next_lambda(Schedule::batch(100, cfg_with(1.0, 0.05, 0.8)), 1, 1.0), 0.8, 0.0);
    EXPECT_NEAR(next_lambda(Schedule::batch(10000, cfg), 7, 1.0), 1.0864812125924955988 / 10.0, 1e-15);
}

TEST(Schedule, SequentialValue) {
    const auto cfg = cfg_with(0.5, 0.1, 0.8);
    EXPECT_NEAR(next_lambda(Schedule::sequential(cfg), 100, 2.0), 0.16113503269359721497, 1e-15);
}

TEST(Schedule, FixedIgnoresState) {
    const auto s = Schedule::fixed(0.3, cfg_with(1.0));
    EXPECT_EQ(next_lambda(s, 1, 0.25), 0.3);
    EXPECT_EQ(next_lambda(s, 1000, 7.0), 0.3);
    EXPECT_EQ(s.name(), "fixed");
}

TEST(Schedule, Errors) {
    const auto cfg = cfg_with(1.0);
    EXPECT_THROW(Schedule::batch(0, cfg), UsageError);
    EXPECT_THROW(Schedule::fixed(0.0, cfg), UsageError);
    EXPECT_THROW(Schedule::fixed(0.85, cfg), UsageError);
    EXPECT_THROW(next_lambda(Schedule::sequential(cfg), 0, 1.0), UsageError);
    EXPECT_THROW(next_lambda(Schedule::sequential(cfg), 3, 0.0), DomainError);
    EXPECT_THROW(Schedule::sequential(cfg_with(1.0, 0.05, 0.9)), ConfigError);
}

TEST(Schedule, RangeAndMonotonicity) {
    CounterRng rng(3, 0);
    for (int i = 0; i < 20000; ++i) {
        const double b = std::exp(rng.uniform(-4.0, 4.0));
        const double alpha = rng.uniform(0.001, 0.9);
        const double c1 = rng.uniform(0.01, 0.8);
        const double sigma = std::exp(rng.uniform(-6.0, 6.0));
        const auto t = static_cast<std::uint64_t>(1 + rng.uniform() * 1e6);
        const auto cfg = cfg_with(b, alpha, c1);

        const double seq = next_lambda(Schedule::sequential(cfg), t, sigma);
        const double seq_next = next_lambda(Schedule::sequential(cfg), t + 1, sigma);
        const double seq_wider = next_lambda(Schedule::sequential(cfg), t, 2.0 * sigma);
        ASSERT_GT(seq, 0.0);
        ASSERT_LE(seq, c1);
        ASSERT_LE(seq_next, seq);
        ASSERT_LE(seq_wider, seq);

        const double bat = next_lambda(Schedule::batch(t, cfg), 1, sigma);
        ASSERT_GT(bat, 0.0);
        ASSERT_LE(bat, c1);
        ASSERT_LE(next_lambda(Schedule::batch(t + 1, cfg), 1, sigma), bat);
    }
}

TEST(Schedule, BatchDoesNotDependOnStep) {
    const auto s = Schedule::batch(5000, cfg_with(1.0));
    EXPECT_EQ(next_lambda(s, 1, 3.0), next_lambda(s, 4999, 3.0));
}
