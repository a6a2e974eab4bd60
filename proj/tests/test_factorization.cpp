#include <gtest/gtest.h>

#include <random>

#include "pairedk/error.hpp"
#include "pairedk/factorization.hpp"
#include "pairedk/symbol_json.hpp"

using namespace pairedk;

namespace {

Rational lin(cplx root) { return Rational(LaurentPoly::from_dense({-root, 1.0})); }
Rational inv_lin(cplx pole) { return Rational::from_parts(LaurentPoly(1.0), {{pole, 1, classify(pole)}}); }

cplx random_point(std::mt19937_64& rng, double rmin, double rmax) {
    std::uniform_real_distribution<double> r(rmin, rmax), t(0.0, 6.283185307179586);
    return std::polar(r(rng), t(rng));
}

}  // namespace

TEST(SymbolJson, CoefficientForm) {
    const auto j = nlohmann::json::parse(R"({"coeffs":{"-1":[1,0],"0":[1,0]}})");
    const Rational f = symbol_from_json(j);
    EXPECT_EQ(f.num(), LaurentPoly::from_dense({1.0, 1.0}, -1));
    EXPECT_EQ(symbol_from_json(symbol_to_json(f)).num(), f.num());
}

TEST(SymbolJson, ZpkFormAndRoundTrip) {
    const auto j = nlohmann::json::parse(
        R"({"gain":[1,0],"zeros":[{"z":[2,0],"m":1,"loc":"out"}],"poles":[{"z":[0.5,0],"m":1,"loc":"in"}]})");
    const Rational g = symbol_from_json(j);
    EXPECT_TRUE(approx_equal(g, lin(2.0) * inv_lin(0.5), 1e-14));
    EXPECT_TRUE(approx_equal(symbol_from_json(symbol_to_json(g)), g, 1e-13));
    EXPECT_THROW(symbol_from_json(nlohmann::json::parse(R"({"coeffs":{"x":[1,0]}})")), Error);
    EXPECT_THROW(symbol_from_json(nlohmann::json::parse(R"({"poles":[{"z":[1,0],"m":0}]})")), Error);
}

TEST(SymbolJson, LocationTagOverridesClassification) {
    const Rational f = symbol_from_json(nlohmann::json::parse(R"({"zeros":[{"z":[0.7071067811865476,0.7071067811865476],"loc":"on"}]})"));
    ASSERT_EQ(f.zpk().zeros.size(), 1u);
    EXPECT_EQ(f.zpk().zeros[0].loc, Location::On);
}

TEST(Normalize, ZpkOfOnePlusInverseZ) {
    const Rational f = rf_normalize(LaurentPoly::from_dense({1.0, 1.0}, -1), LaurentPoly(1.0));
    const Zpk z = f.zpk();
    EXPECT_EQ(z.zpow, -1);
    ASSERT_EQ(z.zeros.size(), 1u);
    EXPECT_NEAR(std::abs(z.zeros[0].value + 1.0), 0.0, 1e-14);
    EXPECT_EQ(z.zeros[0].loc, Location::On);
}

TEST(Winding, Examples) {
    EXPECT_EQ(winding_index(Rational::z(-1)), -1);
    EXPECT_EQ(winding_index(lin(2.0) * inv_lin(0.5)), -1);
    EXPECT_EQ(winding_index(lin(0.5) * lin(1.0 / 3.0)), 2);
    try {
        winding_index(lin(-1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroOrPoleOnCircle);
    }
}

TEST(Winding, AdditiveAndOddUnderConjugation) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const Rational g = lin(random_point(rng, 0.2, 0.8)) * inv_lin(random_point(rng, 1.3, 4.0)) *
                           Rational::z(static_cast<int>(rng() % 5) - 2);
        const Rational h = inv_lin(random_point(rng, 0.2, 0.8)) * lin(random_point(rng, 0.1, 0.9));
        EXPECT_EQ(winding_index(g * h), winding_index(g) + winding_index(h));
        EXPECT_EQ(winding_index(g.circle_conjugate()), -winding_index(g));
    }
}

TEST(WienerHopf, Examples) {
    const WHFactorization a = wiener_hopf(Rational::z(-1));
    EXPECT_EQ(a.kappa, -1);
    EXPECT_TRUE(approx_equal(a.g_minus, 1.0, 1e-15));
    EXPECT_TRUE(approx_equal(a.g_plus, 1.0, 1e-15));

    const WHFactorization b = wiener_hopf(lin(2.0) * inv_lin(0.5));
    EXPECT_EQ(b.kappa, -1);
    const Rational one_minus_half_over_z(LaurentPoly::from_dense({-0.5, 1.0}, -1));
    EXPECT_TRUE(approx_equal(b.g_minus, one_minus_half_over_z.reciprocal(), 1e-14));
    EXPECT_TRUE(approx_equal(b.g_plus, lin(2.0), 1e-14));

    const WHFactorization c = wiener_hopf(lin(0.5));
    EXPECT_EQ(c.kappa, 1);
    EXPECT_TRUE(approx_equal(c.g_minus, one_minus_half_over_z, 1e-14));
    EXPECT_TRUE(approx_equal(c.g_plus, 1.0, 1e-15));
    EXPECT_EQ(to_json(c)["kappa"], 1);
}

TEST(WienerHopf, KappaIsWindingOnRandomSymbols) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        Rational g = cplx{0.7, 0.4};
        for (int i = 0; i < 3; ++i) {
            g = g * (rng() % 2 ? lin(random_point(rng, 0.2, 0.8)) : lin(random_point(rng, 1.25, 5.0)));
            g = g * (rng() % 2 ? inv_lin(random_point(rng, 0.2, 0.8)) : inv_lin(random_point(rng, 1.25, 5.0)));
        }
        const WHFactorization wh = wiener_hopf(g);
        EXPECT_EQ(wh.kappa, winding_index(g));
    }
}

TEST(InnerOuter, Examples) {
    const Rational f = lin(1.0 / 3.0) * inv_lin(-2.0);
    const InnerOuterPair io = inner_outer(f, Side::Plus);
    EXPECT_TRUE(membership(io.inner, SpaceTag::InnerPlus));
    EXPECT_TRUE(membership(io.outer, SpaceTag::OuterPlus));
    EXPECT_TRUE(approx_equal(io.inner * io.outer, f, 1e-13));

    const InnerOuterPair trivial = inner_outer(inv_lin(2.0), Side::Plus);
    EXPECT_TRUE(approx_equal(trivial.inner, 1.0, 1e-15));
    EXPECT_TRUE(approx_equal(trivial.outer, inv_lin(2.0), 1e-15));

    const InnerOuterPair minus = inner_outer(Rational::z(-1), Side::Minus);
    EXPECT_TRUE(approx_equal(minus.inner, 1.0, 1e-15));
    EXPECT_TRUE(approx_equal(minus.outer, Rational::z(-1), 1e-15));
    EXPECT_TRUE(membership(minus.outer, SpaceTag::OuterMinus));

    EXPECT_THROW(inner_outer(inv_lin(0.5), Side::Plus), Error);
    EXPECT_THROW(inner_outer(Rational{}, Side::Plus), Error);
}

TEST(InnerOuter, CircleZerosStayOuter) {
    const InnerOuterPair io = inner_outer(lin(1.0) * lin(0.25), Side::Plus);
    EXPECT_TRUE(membership(io.outer, SpaceTag::OuterPlus));
    EXPECT_EQ(io.outer.zpk().zeros.size(), 2u);
}

TEST(InnerOuter, RandomHardyFunctions) {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 200; ++t) {
        Rational f = cplx{1.5, -0.3} * Rational::z(static_cast<int>(rng() % 3));
        const int nz = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < nz; ++i)
            f = f * lin(rng() % 2 ? random_point(rng, 0.1, 0.85) : random_point(rng, 1.2, 4.0));
        for (int i = 0; i < 2; ++i) f = f * inv_lin(random_point(rng, 1.25, 5.0));
        const InnerOuterPair io = inner_outer(f, Side::Plus);
        EXPECT_TRUE(approx_equal(io.inner * io.outer, f, tolerances().eps_eq));
        for (cplx z : circle_probes(8)) EXPECT_NEAR(std::abs(io.inner(z)), 1.0, 1e-9);
        for (const auto& r : io.outer.zpk().zeros) EXPECT_GT(std::abs(r.value), 1.0 + tolerances().eps_circle);

        const Rational g = f.circle_conjugate().shifted(-1);
        const InnerOuterPair m = inner_outer(g, Side::Minus);
        EXPECT_TRUE(approx_equal(m.inner * m.outer, g, tolerances().eps_eq));
        EXPECT_TRUE(membership(m.inner.circle_conjugate(), SpaceTag::InnerPlus));
        EXPECT_TRUE(membership(m.outer, SpaceTag::OuterMinus));
    }
}
