#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracle.hpp"
#include "pairedk/error.hpp"
#include "pairedk/rational.hpp"
#include "pairedk/riesz.hpp"

using namespace pairedk;

namespace {

Rational lin(cplx root) { return Rational(LaurentPoly::from_dense({-root, 1.0})); }
Rational inv_lin(cplx pole) { return Rational::from_parts(LaurentPoly(1.0), {{pole, 1, classify(pole)}}); }
Rational lp_rational_example() { return Rational(LaurentPoly::from_dense({3.0, 0.0, 2.0})); }

}  // namespace

TEST(Laurent, ArithmeticAndEvaluation) {
    const LaurentPoly p = LaurentPoly::from_dense({5.0, 3.0, 0.0, 2.0}, -1);  // 5/z + 3 + 2z^2
    EXPECT_EQ(p.lo(), -1);
    EXPECT_EQ(p.hi(), 2);
    const cplx z{0.3, 0.7};
    EXPECT_NEAR(std::abs(p(z) - (5.0 / z + 3.0 + 2.0 * z * z)), 0.0, 1e-14);
    const LaurentPoly q = p * p.circle_conjugate();
    EXPECT_EQ(q.lo(), -3);
    EXPECT_EQ(q.hi(), 3);
    EXPECT_NEAR(q.coeff(0).real(), 25.0 + 9.0 + 4.0, 1e-13);
    EXPECT_TRUE((p - p).is_zero());
}

TEST(Laurent, SyntheticDivision) {
    const LaurentPoly p = LaurentPoly::from_dense({-1.0, 0.0, 1.0});  // z^2 - 1
    cplx rem;
    const LaurentPoly q = p.divided_by_linear(1.0, &rem);
    EXPECT_NEAR(std::abs(rem), 0.0, 1e-15);
    EXPECT_EQ(q, LaurentPoly::from_dense({1.0, 1.0}));
}

TEST(Roots, ClassifiesAndClusters) {
    // (z - 1/2)^2 (z - 2) (z - 1)
    const auto d = dense::from_roots({{0.5, 2}, {2.0, 1}, {1.0, 1}});
    const RootSet rs = poly_roots(LaurentPoly::from_dense(d));
    EXPECT_EQ(rs.degree(), 4);
    EXPECT_EQ(rs.count(Location::Inside), 2);
    EXPECT_EQ(rs.count(Location::On), 1);
    EXPECT_EQ(rs.count(Location::Outside), 1);
    EXPECT_THROW(poly_roots(LaurentPoly{}), Error);
}

TEST(Laurent, DeflationByOutsideRootStaysAccurate) {
    const std::vector<cplx> inside{{0.3, 0.1}, {-0.5, 0.2}, {0.1, -0.6}, {0.7, 0.0}};
    std::vector<std::pair<cplx, int>> roots;
    for (const cplx r : inside) roots.push_back({r, 1});
    roots.push_back({4.8, 1});
    roots.push_back({{3.0, 2.0}, 1});
    const LaurentPoly p = LaurentPoly::from_dense(dense::from_roots(roots));
    cplx rem;
    const LaurentPoly q = p.divided_by_linear(4.8, &rem);
    EXPECT_LT(std::abs(rem), 1e-12 * p.magnitude_at(4.8));
    for (const cplx r : inside) EXPECT_LT(std::abs(q(r)), 1e-14 * q.magnitude_at(r));
}

TEST(Rational, SmallResiduePoleSurvivesSum) {
    // residue at z=4 is tiny next to the polynomial's size there, but real
    const Rational u(LaurentPoly::from_dense({1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 10.0}));
    const Rational v = Rational(cplx(2e-3)) * inv_lin(4.0);
    const Rational w = u + v;
    EXPECT_EQ(w.poles().size(), 1u);
    for (const cplx z : {cplx(0.5, 0.5), cplx(-1.0, 0.0), cplx(2.0, -1.0)})
        EXPECT_LT(std::abs(w(z) - u(z) - v(z)), 1e-13 * std::abs(u(z)));
}

TEST(Rational, NormalizeCancelsCommonRoots) {
    const Rational r = rf_normalize(LaurentPoly::from_dense({-1.0, 0.0, 1.0}), LaurentPoly::from_dense({-1.0, 1.0}));
    EXPECT_TRUE(r.is_laurent());
    EXPECT_TRUE(approx_equal(r, lin(-1.0), 1e-12));
    EXPECT_THROW(rf_normalize(LaurentPoly(1.0), LaurentPoly{}), Error);
}

TEST(Rational, CircleConjugate) {
    const Rational f(LaurentPoly::from_dense({1.0, 1.0}, -1));  // 1 + 1/z
    EXPECT_TRUE(approx_equal(f.circle_conjugate(), lin(-1.0), 1e-13));
    const Rational g = inv_lin(0.5);
    for (cplx z : circle_probes()) EXPECT_NEAR(std::abs(g.circle_conjugate()(z) - std::conj(g(z))), 0.0, 1e-13);
}

TEST(Rational, SupNormMatchesDenseSampling) {
    const Rational f = inv_lin(cplx{0.3, 0.6}) * lin(cplx{-1.5, 0.2});
    EXPECT_NEAR(sup_norm(f), oracle::sup([&](cplx z) { return f(z); }), 1e-8);
}

TEST(Riesz, FourierCoefficientOfInsidePole) {
    // 1/(z - 1/2) = sum_{n >= 0} 2^-n z^(-n-1)
    EXPECT_NEAR(std::abs(fourier_coefficient(inv_lin(0.5), -3) - 0.25), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(fourier_coefficient(inv_lin(0.5), 0)), 0.0, 1e-15);
    EXPECT_EQ(fourier_coefficient(inv_lin(2.0), -1), cplx{});
    EXPECT_TRUE(riesz_project(inv_lin(0.5), Side::Plus).is_zero());
    EXPECT_TRUE(riesz_project(inv_lin(2.0), Side::Minus).is_zero());
}

TEST(Riesz, CoefficientsAgreeWithQuadrature) {
    // Double pole inside, double pole outside, pole at 0, polynomial part.
    const Rational f = Rational::from_parts(LaurentPoly::from_dense({1.0, cplx{0.0, 2.0}, 0.5, 0.0, 0.0, 3.0, 1.0}, -1),
                                            {{cplx{0.4, -0.3}, 2, Location::Inside}, {cplx{-1.7, 0.8}, 2, Location::Outside}});
    const auto fn = [&](cplx z) { return f(z); };
    for (int k = -12; k <= 12; ++k)
        EXPECT_NEAR(std::abs(fourier_coefficient(f, k) - oracle::fourier(fn, k)), 0.0, 1e-11) << "k=" << k;
}

TEST(Riesz, ProjectionOfLaurentPolynomial) {
    const Rational f(LaurentPoly::from_dense({5.0, 3.0, 0.0, 2.0}, -1));
    EXPECT_TRUE(approx_equal(riesz_project(f, Side::Plus), Rational(LaurentPoly::from_dense({3.0, 0.0, 2.0})), 1e-14));
    EXPECT_TRUE(approx_equal(riesz_project(f, Side::Minus), Rational(LaurentPoly::monomial(-1, 5.0)), 1e-14));
}

TEST(Riesz, ProjectionsSumToIdentity) {
    const Rational f = inv_lin(0.5) * inv_lin(3.0) * lin(cplx{0.2, 1.4});
    const Rational p = riesz_project(f, Side::Plus);
    const Rational m = riesz_project(f, Side::Minus);
    EXPECT_TRUE(membership(p, SpaceTag::H2plus));
    EXPECT_TRUE(membership(m, SpaceTag::H2minus));
    EXPECT_LT(l2_distance(p + m, f), 1e-13);
    const auto fn = [&](cplx z) { return f(z); };
    for (int k = -5; k <= 5; ++k) {
        const cplx want = oracle::fourier(fn, k);
        EXPECT_NEAR(std::abs(fourier_coefficient(k >= 0 ? p : m, k) - want), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(fourier_coefficient(k >= 0 ? m : p, k)), 0.0, 1e-12);
    }
}

TEST(Riesz, PoleOnCircleRejected) {
    try {
        riesz_project(inv_lin(-1.0), Side::Plus);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PoleOnCircle);
    }
}

TEST(Riesz, Membership) {
    EXPECT_FALSE(membership(inv_lin(-1.0), SpaceTag::L2));
    EXPECT_TRUE(membership(inv_lin(2.0), SpaceTag::H2plus));
    EXPECT_FALSE(membership(inv_lin(0.5), SpaceTag::H2plus));
    EXPECT_TRUE(membership(inv_lin(0.5), SpaceTag::H2minus));
    EXPECT_TRUE(membership(Rational(1.0), SpaceTag::H2plus));
    EXPECT_FALSE(membership(Rational(1.0), SpaceTag::H2minus));
    EXPECT_TRUE(membership(Rational(1.0), SpaceTag::HinfBar));
    // Blaschke factor (z - a)/(1 - conj(a) z)
    const cplx a{0.3, 0.2};
    const Rational b = lin(a) / Rational(LaurentPoly::from_dense({1.0, -std::conj(a)}));
    EXPECT_TRUE(membership(b, SpaceTag::InnerPlus));
    EXPECT_FALSE(membership(b, SpaceTag::OuterPlus));
    EXPECT_TRUE(membership(lin(3.0), SpaceTag::OuterPlus));
    EXPECT_FALSE(membership(lin(3.0), SpaceTag::InnerPlus));
    EXPECT_TRUE(membership(lin(0.5).shifted(-2), SpaceTag::H2minus));
    EXPECT_TRUE(membership(inv_lin(0.5), SpaceTag::OuterMinus));
    EXPECT_FALSE(membership(Rational(LaurentPoly::monomial(-2)), SpaceTag::OuterMinus));
}

TEST(Riesz, InnerProductMatchesQuadrature) {
    const Rational f = inv_lin(cplx{0.6, 0.1}) + lin(2.0);
    const Rational g = inv_lin(cplx{-2.0, 1.0}) * lin(cplx{0.1, 0.0});
    const cplx want = oracle::inner([&](cplx z) { return f(z); }, [&](cplx z) { return g(z); });
    EXPECT_NEAR(std::abs(inner_product(f, g) - want), 0.0, 1e-12);
    // ||1/(z - 1/2)||^2 = 1/(1 - 1/4)
    EXPECT_NEAR(l2_norm(inv_lin(0.5)), std::sqrt(4.0 / 3.0), 1e-14);
}

namespace {

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto point = [&](double rmin, double rmax) { return std::polar(rmin + (rmax - rmin) * u(rng), 6.283185307179586 * u(rng)); };
    Rational f = std::polar(0.5 + 1.5 * u(rng), 6.283185307179586 * u(rng));
    f = f * Rational::z(static_cast<int>(rng() % 7) - 3);
    for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) f = f * lin(u(rng) < 0.5 ? point(0.2, 0.8) : point(1.25, 5.0));
    for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) f = f * inv_lin(u(rng) < 0.5 ? point(0.2, 0.8) : point(1.25, 5.0));
    return f;
}

}  // namespace

TEST(Invariants, RandomProjections) {
    std::mt19937_64 rng(99);
    const double eq = tolerances().eps_eq;
    for (int t = 0; t < 200; ++t) {
        const Rational f = random_rational(rng);
        const Rational p = riesz_project(f, Side::Plus);
        const Rational m = riesz_project(f, Side::Minus);
        const double ref = std::max(1.0, l2_norm(f));
        EXPECT_LE(l2_distance(p + m, f), eq * ref);
        EXPECT_LE(l2_distance(riesz_project(p, Side::Plus), p), eq * ref);
        EXPECT_LE(l2_distance(riesz_project(m, Side::Minus), m), eq * ref);
        EXPECT_LE(l2_norm(riesz_project(m, Side::Plus)), eq * ref);
        EXPECT_TRUE(membership(p, SpaceTag::H2plus));
        EXPECT_TRUE(membership(m, SpaceTag::H2minus));
        EXPECT_EQ(membership(f, SpaceTag::H2plus), m.is_zero());
        for (int k : {-4, -1, 0, 3})
            EXPECT_NEAR(std::abs(fourier_coefficient(f.circle_conjugate(), k) - std::conj(fourier_coefficient(f, -k))), 0.0, eq * ref);
        EXPECT_TRUE(approx_equal(f.circle_conjugate().circle_conjugate(), f, eq));
    }
}

TEST(Invariants, RandomCoefficientsAgreeWithQuadrature) {
    std::mt19937_64 rng(123);
    for (int t = 0; t < 40; ++t) {
        const Rational f = random_rational(rng);
        const double ref = std::max(1.0, l2_norm(f));
        for (int k = -6; k <= 6; k += 3)
            EXPECT_NEAR(std::abs(fourier_coefficient(f, k) - oracle::fourier([&](cplx z) { return f(z); }, k)), 0.0, 1e-11 * ref);
    }
}

TEST(Invariants, LaurentLookup) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::map<int, cplx> m;
        for (int i = 0; i < 5; ++i) m[static_cast<int>(rng() % 13) - 6] = {u(rng), u(rng)};
        const LaurentPoly p(m);
        for (int k = -7; k <= 7; ++k) EXPECT_EQ(fourier_coefficient(Rational(p), k), p.coeff(k));
    }
}

TEST(Laurent, SpecExamples) {
    EXPECT_EQ(LaurentPoly::from_dense({1.0, 1.0}, -1) * LaurentPoly::monomial(1), LaurentPoly::from_dense({1.0, 1.0}));
    EXPECT_TRUE((LaurentPoly::monomial(2) + LaurentPoly::monomial(2, -1.0)).is_zero());
    const LaurentPoly q = LaurentPoly::from_dense({-1.0, 1.0}, -1) * LaurentPoly::from_dense({1.0, 1.0}, -1);
    EXPECT_EQ(q.coeffs(), (std::map<int, cplx>{{-2, -1.0}, {0, 1.0}}));
    EXPECT_TRUE(approx_equal(Rational(cplx{0.0, 1.0}).circle_conjugate(), cplx{0.0, -1.0}, 1e-15));
    EXPECT_TRUE(approx_equal(Rational::z().circle_conjugate(), Rational::z(-1), 1e-15));
    EXPECT_TRUE(rf_normalize(LaurentPoly{}, LaurentPoly::monomial(1)).is_zero());
    EXPECT_EQ(fourier_coefficient(lp_rational_example(), 0), cplx(3.0));
}
