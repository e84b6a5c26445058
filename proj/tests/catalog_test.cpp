#include <gtest/gtest.h>

#include "qpwalk/catalog.hpp"
#include "qpwalk/errors.hpp"
#include "qpwalk/stability.hpp"

namespace qpwalk {
namespace {

TEST(CatalogTest, JsqRates) {
    auto st = jsq_stencil(0.8);
    EXPECT_DOUBLE_EQ(st.interior(1, -1), 1.6);
    EXPECT_DOUBLE_EQ(st.interior(0, -1), 1.0);
    EXPECT_DOUBLE_EQ(st.interior(-1, 1), 1.0);
    EXPECT_DOUBLE_EQ(st.horizontal(0, 1), 1.6);
    EXPECT_DOUBLE_EQ(st.horizontal(-1, 1), 2.0);
    EXPECT_DOUBLE_EQ(st.vertical(1, -1), 1.6);
    EXPECT_DOUBLE_EQ(st.vertical(0, -1), 1.0);
    EXPECT_DOUBLE_EQ(st.origin(0, 1), 1.6);
    EXPECT_DOUBLE_EQ(st.origin.total(), 1.6);
    for (double rho : {0.1, 0.9, 1.0, 3.0}) EXPECT_TRUE(validate(jsq_stencil(rho)).empty());
    EXPECT_THROW(jsq_stencil(0.0), ValidationError);
    EXPECT_THROW(jsq_stencil(-1.0), ValidationError);
}

TEST(CatalogTest, RandomStencilsAreDeterministic) {
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 123456789ull}) {
        EXPECT_EQ(random_stencil(seed, true), random_stencil(seed, true));
        EXPECT_EQ(random_stencil(seed, false), random_stencil(seed, false));
        EXPECT_EQ(random_valid_stencil(seed), random_valid_stencil(seed));
        EXPECT_EQ(random_product_form_stencil(seed), random_product_form_stencil(seed));
    }
    EXPECT_FALSE(random_valid_stencil(1) == random_valid_stencil(2));
}

TEST(CatalogTest, RandomStencilsHonourTheRequestedVerdict) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto yes = random_stencil(seed, true);
        EXPECT_TRUE(validate(yes).empty());
        EXPECT_TRUE(is_ergodic(yes).ergodic) << seed;
        auto no = random_stencil(seed, false);
        EXPECT_TRUE(validate(no).empty());
        EXPECT_FALSE(is_ergodic(no).ergodic) << seed;
    }
}

TEST(CatalogTest, ProductFormStencilsAreErgodic) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto st = random_product_form_stencil(seed);
        EXPECT_TRUE(validate(st).empty());
        EXPECT_TRUE(is_ergodic(st).ergodic) << seed;
    }
}

}  // namespace
}  // namespace qpwalk
