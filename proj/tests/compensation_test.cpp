#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "qpwalk/catalog.hpp"
#include "qpwalk/compensation.hpp"
#include "qpwalk/errors.hpp"
#include "qpwalk/spectral.hpp"
#include "support/oracles.hpp"

namespace qpwalk {
namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

TEST(CompensationTest, JsqStartingAlpha) {
    for (double rho : {0.3, 0.5, 0.8, 0.9}) {
        auto sys = build_kernel_system(jsq_stencil(rho));
        EXPECT_LE(rel(find_starting_alpha(sys), rho * rho), 1e-12) << rho;
        auto cands = starting_candidates(sys);
        ASSERT_EQ(cands.size(), 1u);
        EXPECT_LE(rel(cands[0], 1 / (rho * rho)), 1e-12);
    }
}

TEST(CompensationTest, ResultantContainsTrivialRoot) {
    auto sys = build_kernel_system(jsq_stencil(0.5));
    for (Boundary b : {Boundary::Horizontal, Boundary::Vertical}) {
        auto roots = resultant_roots(sys, b);
        double best = 1e300;
        for (auto z : roots) best = std::min(best, std::abs(z - 1.0));
        EXPECT_LE(best, 1e-8);
    }
}

TEST(CompensationTest, CommonRootAtStart) {
    auto sys = build_kernel_system(jsq_stencil(0.5));
    auto lad = solve_ladder(sys);
    // K(4, .) and A(4, .) share y = 2.
    EXPECT_NEAR(lad.beta_minus1, 0.5, 1e-12);
    EXPECT_NEAR(sys.A(4.0, 2.0), 0.0, 1e-12);
    EXPECT_LE(lad.head_spurious, 1e-12);
}

TEST(CompensationTest, NoFeasibleStartThrows) {
    auto sys = build_kernel_system(jsq_stencil(1.5));
    EXPECT_TRUE(starting_candidates(sys).empty());
    EXPECT_THROW(find_starting_alpha(sys), NumericalError);
}

TEST(CompensationTest, JsqLadderHead) {
    auto sys = build_kernel_system(jsq_stencil(0.5));
    auto lad = extend_ladder(sys, 0.25, 1);
    ASSERT_EQ(lad.size(), 2u);
    EXPECT_NEAR(lad.alphas[0], 0.25, 1e-15);
    EXPECT_LE(rel(lad.betas[0], 0.1), 1e-12);
    EXPECT_LE(rel(lad.alphas[1], 0.04), 1e-12);
    EXPECT_LE(rel(lad.betas[1], 1.0 / 65.0), 1e-12);

    auto single = extend_ladder(sys, 0.25, 0);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_LE(rel(single.betas[0], 0.1), 1e-12);
}

TEST(CompensationTest, JsqLadderMatchesClosedFormQuadratics) {
    for (double rho : {0.3, 0.5, 0.7, 0.9}) {
        auto sys = build_kernel_system(jsq_stencil(rho));
        auto lad = extend_ladder(sys, find_starting_alpha(sys), 9);
        auto ref = testing::jsq_ladder(rho, 10);
        ASSERT_EQ(lad.size(), 10u);
        for (int k = 0; k < 10; ++k) {
            EXPECT_LE(rel(lad.alphas[k], static_cast<double>(ref[k].first)), 1e-12) << rho << " " << k;
            EXPECT_LE(rel(lad.betas[k], static_cast<double>(ref[k].second)), 1e-12) << rho << " " << k;
        }
    }
}

TEST(CompensationTest, JsqStartingBeta) {
    for (double rho : {0.3, 0.5, 0.7, 0.9}) {
        auto lad = solve_ladder(build_kernel_system(jsq_stencil(rho)));
        EXPECT_LE(rel(lad.betas[0], rho * rho / (2 + rho)), 1e-12) << rho;
    }
}

void expect_interleaved(const ProductFormLadder& lad) {
    ASSERT_GE(lad.size(), 2u);
    EXPECT_LT(lad.alphas[0], 1.0);
    for (std::size_t k = 0; k < lad.size(); ++k) {
        EXPECT_GT(lad.alphas[k], 0.0);
        EXPECT_LT(lad.betas[k], lad.alphas[k]) << k;
        if (k + 1 < lad.size()) EXPECT_LT(lad.alphas[k + 1], lad.betas[k]) << k;
    }
}

TEST(CompensationTest, LadderInterleavesAndDecays) {
    std::vector<RateStencil> stencils;
    for (double rho : {0.3, 0.5, 0.7, 0.9}) stencils.push_back(jsq_stencil(rho));
    for (std::uint64_t seed = 0; seed < 10; ++seed) stencils.push_back(random_product_form_stencil(seed));
    for (const auto& st : stencils) {
        auto sys = build_kernel_system(st);
        auto lad = solve_ladder(sys);
        expect_interleaved(lad);
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < lad.size(); ++k) {
            worst = std::max(worst, lad.alphas[k + 1] / lad.alphas[k]);
            EXPECT_LE(kernel_residual(sys, lad.alphas[k], lad.betas[k]), 1e-12);
            EXPECT_LE(kernel_residual(sys, lad.alphas[k + 1], lad.betas[k]), 1e-12);
        }
        EXPECT_LT(worst, 1.0);
    }
}

TEST(CompensationTest, LadderHeadIsFast) {
    auto sys = build_kernel_system(jsq_stencil(0.5));
    auto t0 = std::chrono::steady_clock::now();
    auto lad = extend_ladder(sys, find_starting_alpha(sys), 10);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_EQ(lad.size(), 11u);
    EXPECT_LT(ms, 10.0);
}

TEST(CompensationTest, EigenvectorTailOfHead) {
    auto sys = build_kernel_system(jsq_stencil(0.5));
    auto tail = eigenvector_tail(sys, 0.25, 1.0, 3);
    ASSERT_EQ(tail.size(), 3u);
    EXPECT_LE(rel(tail[0], 0.6), 1e-12);
    EXPECT_LE(rel(tail[1], 0.06), 1e-12);
    EXPECT_LE(rel(tail[2], 0.006), 1e-12);

    auto scaled = eigenvector_tail(sys, 0.25, -2.5, 3);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(scaled[i], -2.5 * tail[i], 1e-15);
}

TEST(CompensationTest, HeadRowIsPureGeometric) {
    auto sys = build_kernel_system(jsq_stencil(0.5));
    auto lad = solve_ladder(sys);
    EXPECT_LE(rel(lad.c[0], 6.0), 1e-12);
    for (int m = 1; m <= 8; ++m)
        EXPECT_LE(rel(lad.eigvec(0, m), 6.0 * std::pow(0.1, m)), 1e-12) << m;
}

TEST(CompensationTest, RowsMatchTheirFits) {
    auto sys = build_kernel_system(jsq_stencil(0.7));
    auto lad = solve_ladder(sys);
    for (std::size_t k = 1; k < std::min<std::size_t>(lad.size(), 8); ++k) {
        double bb = lad.betas[k - 1], bs = lad.betas[k];
        for (int m = 1; m <= 5; ++m) {
            double fit = lad.c[k] * std::pow(bb, m) + lad.g[k] * std::pow(bs, m);
            double row = lad.rows[k][m];
            EXPECT_NEAR(fit, row, 1e-9 * (std::fabs(lad.c[k]) * std::pow(bb, m) + std::fabs(row)));
        }
        EXPECT_NEAR(lad.f(k), lad.g[k] / lad.c[k], 1e-15 * std::fabs(lad.f(k)));
    }
}

TEST(CompensationTest, CoefficientsAreLinearInOriginWeight) {
    auto sys = build_kernel_system(jsq_stencil(0.5));
    LadderOptions one, three;
    three.p00 = 3.0;
    auto a = solve_ladder(sys, one), b = solve_ladder(sys, three);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_NEAR(b.d[k], 3 * a.d[k], 1e-12 * std::fabs(a.d[k]) + 1e-300);
        EXPECT_NEAR(b.e[k], 3 * a.e[k], 1e-12 * std::fabs(a.e[k]) + 1e-300);
    }
}

TEST(CompensationTest, BoundaryEquationsBalance) {
    std::vector<RateStencil> stencils;
    for (double rho : {0.3, 0.5, 0.7, 0.9}) stencils.push_back(jsq_stencil(rho));
    for (std::uint64_t seed = 0; seed < 10; ++seed) stencils.push_back(random_product_form_stencil(seed));
    for (const auto& st : stencils) {
        auto sol = solve(st);
        double err = testing::max_balance_error([&](int n, int m) { return sol.raw(n, m); }, st, 20);
        EXPECT_LE(err, 1e-10);
    }
}

TEST(CompensationTest, TermLimitAndStopReason) {
    auto sys = build_kernel_system(jsq_stencil(0.5));
    LadderOptions opts;
    opts.max_terms = 3;
    auto lad = solve_ladder(sys, opts);
    EXPECT_EQ(lad.size(), 3u);
    EXPECT_EQ(lad.stop, StopReason::TermLimit);
    auto full = solve_ladder(sys);
    EXPECT_EQ(full.stop, StopReason::Converged);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(lad.d[k], full.d[k]);
}

}  // namespace
}  // namespace qpwalk
