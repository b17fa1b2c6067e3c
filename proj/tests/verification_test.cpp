#include <cmath>

#include <gtest/gtest.h>

#include "confseq/verification.hpp"

using namespace confseq;

// Reference values computed with 40-digit arithmetic (mpmath).

TEST(LemmaGap, Examples) {
    EXPECT_NEAR(lemma_main_gap(0.25, 0.5, 1.0), -0.0023135316172192549, 1e-15);
    EXPECT_NEAR(lemma_main_gap(0.5, 0.8, 1.0), -0.0083744490476418930, 1e-15);
    EXPECT_LE(lemma_main_gap(0.001, 0.001, 10.0), 0.0);
}

TEST(LemmaGap, DomainErrors) {
    EXPECT_THROW(lemma_main_gap(0.0, 0.5, 1.0), DomainError);
    EXPECT_THROW(lemma_main_gap(0.51, 0.5, 1.0), DomainError);
    EXPECT_THROW(lemma_main_gap(0.25, 0.81, 1.0), DomainError);
    EXPECT_THROW(lemma_main_gap(0.25, 0.5, 0.99), DomainError);
}

TEST(LemmaGap, SeriesBranchIsContinuous) {
    for (double a : {-0.5, 0.5}) {
        const double below = exp_remainder_ratio<double>(std::nextafter(a, 0.0));
        const double at = exp_remainder_ratio<double>(a);
        EXPECT_NEAR(below, at, 1e-14) << a;
    }
    EXPECT_EQ(exp_remainder_ratio<double>(0.0), 0.5);
    const Real50 hp = exp_remainder_ratio<Real50>(Real50("1e-3"));
    EXPECT_NEAR(exp_remainder_ratio<double>(1e-3), hp.convert_to<double>(), 1e-16);
}

TEST(LemmaGap, FiftyDigitCornersAgree) {
    const auto check = certify_lemma_main_corners_50digit();
    EXPECT_TRUE(check.report.passed) << check.report.max_violation;
    EXPECT_EQ(check.report.points, 4u * 4u * lemma_grid_d_values().size());
    EXPECT_LT(check.max_abs_disagreement, 1e-14);
}

TEST(LemmaGap, FullGridCertificate) {
    const auto r = certify_lemma_main();
    EXPECT_EQ(r.points, 800u * 500u * 7u);
    EXPECT_TRUE(r.passed) << r.max_violation;
    EXPECT_LE(r.max_violation, 0.0);
}

TEST(CoshSinh, Examples) {
    EXPECT_NEAR(cosh_sinh_gap(1.0, 0.0), -0.63212055882855768, 1e-15);
    EXPECT_EQ(cosh_sinh_gap(0.0, 3.0), 0.0);
    EXPECT_LT(cosh_sinh_gap(1e-4, 0.0), 0.0);
    EXPECT_THROW(cosh_sinh_gap(400.0, 400.0), DomainError);
    EXPECT_THROW(cosh_sinh_gap(NAN, 0.0), DomainError);
}

TEST(CoshSinh, RandomCertificate) {
    const auto r = certify_cosh_sinh(200000, 1);
    EXPECT_EQ(r.points, 200000u);
    EXPECT_TRUE(r.passed) << r.max_violation;
}

TEST(QMajorization, Examples) {
    EXPECT_NEAR(q_majorization_gap(1.0), 0.0039403937631769869, 1e-16);
    EXPECT_NEAR(q_majorization_gap(-1.0), 0.021009447717446567, 1e-16);
    EXPECT_EQ(q_majorization_gap(0.0), 0.0);
    EXPECT_THROW(q_majorization_gap(1.0001), DomainError);
}

TEST(QMajorization, GridCertificate) {
    const auto r = certify_q_majorization();
    EXPECT_EQ(r.points, 200001u);
    EXPECT_TRUE(r.passed) << r.max_violation;
}

TEST(PsiSandwich, GridCertificate) {
    const auto r = certify_psi_sandwich();
    EXPECT_EQ(r.points, 10000u);
    EXPECT_TRUE(r.passed) << r.max_violation;
}

TEST(Trace, StartsAtOneAndStaysPositive) {
    const auto dist = DistributionSpec::rademacher_cube(3);
    BoundConfig cfg;
    cfg.b_norm_bound = dist.norm_bound();
    const auto trace = simulate_trace(dist, SpaceSpec::euclidean(3), cfg, Schedule::sequential(cfg), 2000, 3);
    EXPECT_EQ(trace.s0, 1.0);
    ASSERT_EQ(trace.steps.size(), 2000u);
    for (const auto& s : trace.steps) {
        ASSERT_GT(s.s, 0.0);
        ASSERT_TRUE(std::isfinite(s.log_s));
        ASSERT_FALSE(s.log_s_tilde.has_value());
    }
}

TEST(Trace, ExpFormIsAtMostTwiceCoshForm) {
    const auto dist = DistributionSpec::uniform_cube(5);
    BoundConfig cfg;
    cfg.b_norm_bound = dist.norm_bound();
    for (double lambda : {0.05, 0.3, 0.8}) {
        const auto trace = simulate_trace(dist, SpaceSpec::euclidean(5), cfg, Schedule::fixed(lambda, cfg), 3000, 4);
        for (const auto& s : trace.steps) {
            ASSERT_TRUE(s.log_s_tilde.has_value());
            ASSERT_LE(*s.log_s_tilde, std::log(2.0) + s.log_s + 1e-9);
        }
    }
}

TEST(Trace, LogCoshMatchesDirect) {
    for (double m : {0.0, 1e-8, 0.3, 5.0, 40.0}) EXPECT_NEAR(log_cosh(m), std::log(std::cosh(m)), 1e-14 * (1.0 + m));
    EXPECT_NEAR(log_cosh(2000.0), 2000.0 - std::log(2.0), 1e-9);
}

TEST(SupermartingaleMc, SmallRun) {
    const auto r = supermartingale_mc_check(DistributionSpec::rademacher_cube(5), 5, 20000, 7);
    ASSERT_EQ(r.cells.size(), 5u);
    EXPECT_TRUE(r.passed);
    // At t = 1 every Rademacher draw has the same norm, so the ratio is exact.
    EXPECT_EQ(r.cells[0].stderr_, 0.0);
    for (const auto& c : r.cells) EXPECT_GT(c.ratio, 0.0);
    for (std::size_t i = 1; i < r.cells.size(); ++i) EXPECT_GT(r.cells[i].stderr_, 0.0);
}

TEST(SupermartingaleMc, DeterministicAcrossWorkerCounts) {
    const auto dist = DistributionSpec::uniform_cube(3);
    const auto a = supermartingale_mc_check(dist, 3, 10000, 8, SequentialCS{}, 0.05, 1);
    const auto b = supermartingale_mc_check(dist, 3, 10000, 8, SequentialCS{}, 0.05, 4);
    for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].ratio, b.cells[i].ratio);
}

TEST(Coverage, SmallRun) {
    const auto r = ville_coverage(DistributionSpec::rademacher_cube(2), Method::EmpiricalBernstein, 200, 200, 0.05, 9);
    EXPECT_EQ(r.runs, 200u);
    EXPECT_NEAR(r.threshold, 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / 200.0), 1e-15);
    EXPECT_TRUE(r.passed) << r.rate;
}

TEST(Coverage, FiniteLilNeedsQuarterBound) {
    EXPECT_THROW(ville_coverage(DistributionSpec::rademacher_cube(2), Method::FiniteLIL, 10, 10, 0.05, 1), ConfigError);
    const DistributionSpec small(CustomProduct{{RademacherCoord{0.1}, RademacherCoord{0.1}}});
    EXPECT_THROW(ville_coverage(small, Method::FiniteLIL, 10, 10, 0.1, 1), ConfigError);
    EXPECT_THROW(ville_coverage(small, Method::Hoeffding, 10, 10, 0.05, 1), UsageError);
    const auto r = ville_coverage(small, Method::FiniteLIL, 200, 100, 0.05, 1);
    EXPECT_TRUE(r.passed) << r.rate;
}

TEST(AsymptoticLil, SkipsDegenerate) {
    const auto r = asymptotic_lil_check(DistributionSpec::point_mass(Vec{0.2, 0.2}), 1000, 1);
    EXPECT_TRUE(r.skipped);
    EXPECT_TRUE(r.passed);
}

TEST(AsymptoticLil, FiniteStatistic) {
    const auto r = asymptotic_lil_check(DistributionSpec::uniform_cube(5), 20000, 2);
    EXPECT_FALSE(r.skipped);
    EXPECT_GT(r.t0, 0u);
    EXPECT_TRUE(std::isfinite(r.full_max));
    EXPECT_GE(r.full_max, r.tail_max);
    EXPECT_GE(r.tail_start, r.t0);
}
