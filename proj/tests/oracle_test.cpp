#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qpwalk/catalog.hpp"
#include "qpwalk/errors.hpp"
#include "qpwalk/oracle.hpp"
#include "qpwalk/spectral.hpp"
#include "support/oracles.hpp"

namespace qpwalk {
namespace {

int off_diagonal(const TruncatedChain& ch) {
    int count = 0;
    for (int i = 0; i < ch.Q.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ch.Q, i); it; ++it)
            if (it.col() != i) ++count;
    return count;
}

TEST(OracleTest, SmallBoxStructure) {
    auto ch = build_truncated(jsq_stencil(0.5), 2);
    EXPECT_EQ(ch.states(), 9);
    // At (2,2) only the (0,-1) step stays inside the box.
    int i = ch.index(2, 2), count = 0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ch.Q, i); it; ++it) {
        if (it.col() == i) EXPECT_DOUBLE_EQ(it.value(), -1.0);
        else {
            EXPECT_EQ(it.col(), ch.index(2, 1));
            ++count;
        }
    }
    EXPECT_EQ(count, 1);
    EXPECT_THROW(build_truncated(jsq_stencil(0.5), 1), ValidationError);
}

TEST(OracleTest, RowsSumToZeroExactly) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto ch = build_truncated(random_valid_stencil(seed), 30);
        for (int i = 0; i < ch.Q.outerSize(); ++i) {
            double s = 0.0;
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ch.Q, i); it; ++it)
                if (it.col() != i) s += it.value();
            s += ch.Q.coeff(i, i);
            EXPECT_EQ(s, 0.0);
        }
        EXPECT_LE(off_diagonal(ch), 5 * 31 * 31);
    }
    auto jsq = build_truncated(jsq_stencil(0.5), 40);
    EXPECT_LE(off_diagonal(jsq), 5 * 41 * 41);
}

TEST(OracleTest, BirthDeathStrip) {
    const double lambda = 1.3, mu = 2.0;
    RateStencil st;
    st.origin.set(1, 0, lambda);
    st.horizontal.set(1, 0, lambda);
    st.horizontal.set(-1, 0, mu);
    st.interior.set(-1, -1, 1.0);
    const int L = 30;
    auto ch = build_truncated(st, L);
    EXPECT_TRUE(ch.irreducible);
    auto sol = stationary(ch);
    double z = 0.0;
    for (int n = 0; n <= L; ++n) z += std::pow(lambda / mu, n);
    for (int n = 0; n <= L; ++n) {
        double expect = std::pow(lambda / mu, n) / z;
        EXPECT_NEAR(sol.at(n, 0), expect, 1e-12 * expect);
        EXPECT_EQ(sol.at(n, 1), 0.0);
    }
}

TEST(OracleTest, ReducibleChainIsRejected) {
    RateStencil st;
    st.origin.set(1, 0, 1.0);
    st.horizontal.set(1, 0, 1.0);
    auto ch = build_truncated(st, 5);
    EXPECT_FALSE(ch.irreducible);
    EXPECT_THROW(stationary(ch), NumericalError);
}

TEST(OracleTest, SymmetricGeneratorGivesSymmetricLaw) {
    RateStencil st;
    st.interior.set(-1, 0, 1.0);
    st.interior.set(0, -1, 1.0);
    st.interior.set(-1, 1, 0.4);
    st.interior.set(1, -1, 0.4);
    st.interior.set(-1, -1, 0.3);
    st.horizontal.set(1, 0, 0.5);
    st.horizontal.set(0, 1, 0.5);
    st.horizontal.set(-1, 0, 1.0);
    st.vertical.set(0, 1, 0.5);
    st.vertical.set(1, 0, 0.5);
    st.vertical.set(0, -1, 1.0);
    st.origin.set(1, 0, 0.7);
    st.origin.set(0, 1, 0.7);
    auto sol = stationary(build_truncated(st, 25));
    for (int n = 0; n <= 25; ++n)
        for (int m = 0; m < n; ++m) EXPECT_NEAR(sol.at(n, m), sol.at(m, n), 1e-12 * sol.at(n, m) + 1e-300);
}

TEST(OracleTest, JsqConvergesInBoxSize) {
    auto st = jsq_stencil(0.5);
    auto a = stationary(build_truncated(st, 40)), b = stationary(build_truncated(st, 80));
    EXPECT_LE(a.residual, 1e-12);
    auto m = [](const OracleSolution& o) { return Measure([&o](int n, int mm) { return o.at(n, mm); }); };
    EXPECT_LE(compare(m(a), m(b), 10).tv, 1e-8);
    EXPECT_EQ(compare(m(a), m(a), 10).tv, 0.0);
}

TEST(OracleTest, DoublingTheBoxApproachesTheSpectralSolution) {
    auto st = jsq_stencil(0.7);
    auto sol = solve(st);
    double prev = 1.0;
    for (int L : {10, 20, 40}) {
        double tv = compare(sol, stationary(build_truncated(st, L)), 8).tv;
        EXPECT_LE(tv, prev + 1e-15) << L;
        prev = tv;
    }
    EXPECT_LE(prev, 1e-6);
}

TEST(OracleTest, FakeProductFormOnlyBalancesTheInterior) {
    auto st = jsq_stencil(0.5);
    Measure fake = [](int n, int m) { return std::pow(0.25, n) * std::pow(0.1, m); };
    // States with n, m >= 2 only see interior neighbours.
    EXPECT_LE(testing::max_balance_error(fake, st, 10, 2), 1e-12);
    auto r = balance_residual(fake, st, 10);
    EXPECT_GT(std::max({r.horizontal, r.vertical, r.origin}), 1e-2);
}

TEST(OracleTest, RandomProductFormStencilsAgree) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        auto st = random_product_form_stencil(seed);
        auto sol = solve(st);
        double decay = std::max(sol.ladder().alphas[0], sol.ladder().betas[0]);
        int L = std::clamp(static_cast<int>(std::ceil(std::log(1e-13) / std::log(decay))), 40, 200);
        auto oracle = stationary(build_truncated(st, L));
        EXPECT_LE(compare(sol, oracle, 10).tv, 1e-6) << seed << " L=" << L;
    }
}

}  // namespace
}  // namespace qpwalk
