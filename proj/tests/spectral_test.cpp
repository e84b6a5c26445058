#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qpwalk/catalog.hpp"
#include "qpwalk/errors.hpp"
#include "qpwalk/oracle.hpp"
#include "qpwalk/spectral.hpp"
#include "support/oracles.hpp"

namespace qpwalk {
namespace {

TEST(SpectralTest, NormalizesOverTheQuadrant) {
    for (double rho : {0.3, 0.5, 0.7}) {
        auto sol = solve(jsq_stencil(rho));
        double s = 0.0;
        for (int n = 0; n <= 200; ++n)
            for (int m = 0; m <= 200; ++m) s += sol.pi(n, m);
        EXPECT_NEAR(s, 1.0, 1e-10) << rho;
    }
}

TEST(SpectralTest, NonNegative) {
    std::vector<RateStencil> stencils = {jsq_stencil(0.5), jsq_stencil(0.9)};
    for (std::uint64_t seed = 0; seed < 5; ++seed) stencils.push_back(random_product_form_stencil(seed));
    for (const auto& st : stencils) {
        auto sol = solve(st);
        for (int n = 0; n <= 50; ++n)
            for (int m = 0; m <= 50; ++m) EXPECT_GE(sol.pi(n, m), -1e-14);
    }
}

TEST(SpectralTest, OriginBalance) {
    auto sol = solve(jsq_stencil(0.5));
    // r(0,1) = 1 out of the origin, v(0,-1) = 1 back in from (0,1).
    EXPECT_NEAR(sol.pi00(), sol.pi(0, 1), 1e-15);
    EXPECT_DOUBLE_EQ(pi_eval(sol, 0, 0), sol.pi00());
}

TEST(SpectralTest, DecayFollowsTheLeadingAlpha) {
    auto sol = solve(jsq_stencil(0.5));
    for (int n = 30; n < 34; ++n) EXPECT_NEAR(sol.pi(n + 1, 1) / sol.pi(n, 1), 0.25, 1e-6);
}

TEST(SpectralTest, AgreesWithTruncatedChain) {
    auto st = jsq_stencil(0.5);
    LadderOptions opts;
    opts.max_terms = 30;
    auto sol = solve(st, opts);
    auto oracle = stationary(build_truncated(st, 80));
    EXPECT_LE(compare(sol, oracle, 20).tv, 1e-6);
}

TEST(SpectralTest, PgfMatchesDirectSum) {
    auto sol = solve(jsq_stencil(0.5));
    EXPECT_NEAR(pgf_eval(sol, 0.0, 0.0), sol.pi00(), 1e-15);
    for (auto [x, y] : {std::pair{0.3, 0.2}, std::pair{-0.4, 0.7}, std::pair{0.9, -0.5}}) {
        double s = 0.0;
        for (int n = 0; n <= 300; ++n)
            for (int m = 0; m <= 300; ++m) s += sol.pi(n, m) * std::pow(x, n) * std::pow(y, m);
        EXPECT_NEAR(pgf_eval(sol, x, y), s, 1e-12);
    }
    EXPECT_NEAR(pgf_eval(sol, 0.999, 0.999), 1.0, 1e-3);
    EXPECT_THROW(pgf_eval(sol, 1.0, 0.5), ValidationError);
    EXPECT_THROW(pgf_eval(sol, 0.5, -1.2), ValidationError);
}

TEST(SpectralTest, FunctionalEquationHolds) {
    std::vector<RateStencil> stencils = {jsq_stencil(0.5), jsq_stencil(0.9)};
    for (std::uint64_t seed = 0; seed < 5; ++seed) stencils.push_back(random_product_form_stencil(seed));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (const auto& st : stencils) {
        auto sol = solve(st);
        for (int i = 0; i < 10; ++i) {
            auto r = functional_equation_residual(sol, u(rng), u(rng));
            EXPECT_LE(std::fabs(r.residual), 1e-10 * r.scale);
        }
    }
}

TEST(SpectralTest, TruncatedRateMatrix) {
    auto sol = solve(jsq_stencil(0.5));
    auto r1 = build_RN(sol, 1);
    EXPECT_NEAR(r1.R(0, 0), 0.25, 1e-15);

    auto r8 = build_RN(sol, 8);
    EXPECT_EQ(r8.R.rows(), 8);
    EXPECT_LE(eigen_row_residual(r8), 1e-10);
    EXPECT_NEAR(spectral_radius(r8), 0.25, 1e-10);
    EXPECT_TRUE(r8.ill_conditioned);

    auto lvl1 = sol.level(1, 4), lvl2 = sol.level(2, 4);
    auto rn4 = build_RN(sol, 4);
    for (int j = 0; j < 4; ++j) {
        double v = 0.0;
        for (int i = 0; i < 4; ++i) v += lvl1[i] * rn4.R(i, j);
        EXPECT_NEAR(v, lvl2[j], 1e-6 * std::fabs(lvl2[j])) << j;
    }
    EXPECT_THROW(build_RN(sol, 0), ValidationError);
    EXPECT_THROW(build_RN(sol, 1000), ValidationError);
}

TEST(SpectralTest, ResolventSeriesMatchesDirectSolve) {
    auto sol = solve(jsq_stencil(0.5));
    auto rn = build_RN(sol, 8);
    for (double a : {0.5, 0.75}) {
        auto series = resolvent_eval(sol, a, 8);
        auto direct = resolvent_direct(sol, rn, a);
        for (int j = 0; j < 8; ++j) EXPECT_NEAR(series[j], direct[j], 1e-8 * (std::fabs(direct[j]) + 1e-300));
    }
}

TEST(SpectralTest, ResolventLimits) {
    auto sol = solve(jsq_stencil(0.5));
    auto lvl1 = sol.level(1, 4);
    double big = 1e6;
    auto far = resolvent_eval(sol, big, 4);
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(big * far[j], lvl1[j], 1e-5 * std::fabs(lvl1[j]));

    EXPECT_THROW(resolvent_eval(sol, 0.25, 4), NumericalError);
    // Near the leading pole the series is dominated by one simple pole.
    auto a = resolvent_eval(sol, 0.25 + 1e-6, 4), b = resolvent_eval(sol, 0.25 + 2e-6, 4);
    EXPECT_NEAR(a[1] / b[1], 2.0, 1e-4);
}

TEST(SpectralTest, TailBoundTracksTruncation) {
    auto st = jsq_stencil(0.5);
    auto full = solve(st);
    LadderOptions opts;
    opts.max_terms = 6;
    auto cut = solve(st, opts);
    for (auto [n, m] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{2, 3}, std::pair{0, 5}}) {
        auto e = cut.pi_detailed(n, m);
        double actual = std::fabs(e.value * cut.mass() - full.pi(n, m) * full.mass());
        EXPECT_TRUE(std::isfinite(e.tail_bound));
        EXPECT_LE(actual, 10 * e.tail_bound * cut.mass() + 1e-17) << n << "," << m;
    }
}

TEST(SpectralTest, RejectsNonSummableLadder) {
    auto lad = solve_ladder(build_kernel_system(jsq_stencil(0.5)));
    lad.alphas[0] = 1.2;
    EXPECT_THROW(SpectralSolution(lad, jsq_stencil(0.5)), NumericalError);
}

TEST(SpectralTest, PerturbedStartBreaksBalance) {
    auto st = jsq_stencil(0.5);
    auto lad = solve_ladder(build_kernel_system(st));
    EXPECT_LE(balance_residual(SpectralSolution(lad, st), 10).max(), 1e-12);
    lad.alphas[0] += 1e-3;
    SpectralSolution bent(lad, st);
    EXPECT_GT(balance_residual(bent, 10).max(), 1e-4);
    EXPECT_GT(testing::max_balance_error([&](int n, int m) { return bent.raw(n, m); }, st, 10), 1e-4);
}

}  // namespace
}  // namespace qpwalk
