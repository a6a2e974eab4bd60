#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "pairedk/error.hpp"
#include "pairedk/kernels.hpp"

using namespace pairedk;

namespace {

Rational lin(cplx root) { return Rational(LaurentPoly::from_dense({-root, 1.0})); }
Rational inv_lin(cplx pole) { return Rational::from_parts(LaurentPoly(1.0), {{pole, 1, classify(pole)}}); }
Rational lp(std::vector<cplx> c, int lo = 0) { return Rational(LaurentPoly::from_dense(c, lo)); }
Rational z(int k = 1) { return Rational::z(k); }

const Rational kA = lp({1.0, 1.0}, -1);  // 1 + 1/z
const Rational kB = lp({1.0, 1.0});      // z + 1
const Rational kRem = lp({-1.0, 1.0}, -1);  // 1 - 1/z

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::UnknownProperty;
}

// f and g span the same line.
bool proportional(const Rational& f, const Rational& g) {
    const cplx p = circle_probes(7)[3];
    const cplx s = f(p) / g(p);
    return approx_equal(f, s * g, 1e-10);
}

constexpr int kModes = 96;

std::vector<cplx> quad_coeffs(const std::function<cplx(cplx)>& f) {
    constexpr int M = 2048;
    std::vector<cplx> values(M);
    for (int j = 0; j < M; ++j) values[j] = f(std::polar(1.0, 2.0 * std::numbers::pi * j / M));
    std::vector<cplx> c(2 * kModes + 1);
    for (int k = -kModes; k <= kModes; ++k) {
        cplx s{};
        for (int j = 0; j < M; ++j) s += values[j] * std::polar(1.0, -2.0 * std::numbers::pi * k * j / M);
        c[k + kModes] = s / static_cast<double>(M);
    }
    return c;
}

// Quadrature check of P+(a f) = P-(b f) = 0, relative to sup |a f|, |b f|.
double quad_sigma_residual(const Rational& f, const SymbolPair& p) {
    const auto af = quad_coeffs([&](cplx w) { return p.a(w) * f(w); });
    const auto bf = quad_coeffs([&](cplx w) { return p.b(w) * f(w); });
    double r = 0.0, sa = 0.0, sb = 0.0;
    for (int k = -kModes; k <= kModes; ++k) {
        sa = std::max(sa, std::abs(af[k + kModes]));
        sb = std::max(sb, std::abs(bf[k + kModes]));
    }
    for (int k = -kModes; k <= kModes; ++k) {
        if (k >= 0) r = std::max(r, std::abs(af[k + kModes]) / sa);
        if (k < 0) r = std::max(r, std::abs(bf[k + kModes]) / sb);
    }
    return r;
}

// Quadrature check of a P+φ + b P-φ = 0 at a few circle points.
double quad_paired_residual(const Rational& phi, const SymbolPair& p) {
    const auto c = quad_coeffs([&](cplx w) { return phi(w); });
    double r = 0.0, ref = 0.0;
    for (const cplx w : circle_probes(11)) {
        cplx plus{}, minus{};
        for (int k = -kModes; k <= kModes; ++k) (k >= 0 ? plus : minus) += c[k + kModes] * std::pow(w, k);
        r = std::max(r, std::abs(p.a(w) * plus + p.b(w) * minus));
        ref = std::max({ref, std::abs(p.a(w) * plus), std::abs(p.b(w) * minus)});
    }
    return r / ref;
}

// Symbols with roots in 0.2 <= |z| <= 0.6 or 1.6 <= |z| <= 5, so truncations at
// N = 64 see negligible tails.
Rational random_symbol(std::mt19937_64& rng, int max_roots = 3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, max_roots);
    auto root = [&] {
        const double r = u(rng) < 0.5 ? 0.2 + 0.4 * u(rng) : 1.6 + 3.4 * u(rng);
        return std::polar(r, 2.0 * std::numbers::pi * u(rng));
    };
    Zpk zpk{std::polar(0.5 + u(rng), 2.0 * std::numbers::pi * u(rng)), std::uniform_int_distribution<int>(-2, 2)(rng), {}, {}};
    for (int i = count(rng); i > 0; --i) {
        const cplx r = root();
        zpk.zeros.push_back({r, 1, classify(r)});
    }
    for (int i = count(rng); i > 0; --i) {
        const cplx r = root();
        zpk.poles.push_back({r, 1, classify(r)});
    }
    return Rational::from_zpk(zpk);
}

}  // namespace

TEST(ToeplitzKernel, Examples) {
    const KernelBasis k1 = toeplitz_kernel(z(-1));
    ASSERT_EQ(k1.status, KernelStatus::Exact);
    ASSERT_EQ(k1.dimension(), 1);
    EXPECT_TRUE(proportional(k1.elements[0], 1.0));

    const Rational g = lin(2.0) * inv_lin(0.5);
    const KernelBasis k2 = toeplitz_kernel(g);
    ASSERT_EQ(k2.dimension(), 1);
    EXPECT_TRUE(proportional(k2.elements[0], inv_lin(2.0)));
    EXPECT_TRUE(membership(riesz_project(g * k2.elements[0], Side::Minus), SpaceTag::H2minus));

    EXPECT_EQ(toeplitz_kernel(lin(0.5)).status, KernelStatus::Empty);
    EXPECT_EQ(toeplitz_kernel(lin(1.0)).status, KernelStatus::NeedsOracle);
    EXPECT_EQ(code_of([] { toeplitz_kernel(Rational{}); }), ErrorCode::DegenerateSymbol);
}

TEST(PairedKernel, Examples) {
    const KernelBasis k1 = paired_kernel(make_pair(1.0, z()));
    ASSERT_EQ(k1.dimension(), 1);
    EXPECT_TRUE(proportional(k1.elements[0], kRem));
    EXPECT_LT(quad_paired_residual(k1.elements[0], make_pair(1.0, z())), 1e-12);

    const SymbolPair rem = make_pair(kA, kB);
    const KernelBasis k2 = paired_kernel(rem);
    ASSERT_EQ(k2.dimension(), 1);
    EXPECT_TRUE(proportional(k2.elements[0], kRem));
    EXPECT_TRUE(member_S(kRem, rem));

    EXPECT_EQ(paired_kernel(make_pair(z(), 1.0)).status, KernelStatus::Empty);
    EXPECT_EQ(code_of([] { make_pair(Rational{}, 1.0); }), ErrorCode::DegenerateSymbol);
}

TEST(PairedKernel, ElementsAvoidHardySpaces) {
    const SymbolPair p = make_pair(lin(3.0) * inv_lin(0.4), z(2) * lin(0.3));
    const KernelBasis k = paired_kernel(p);
    ASSERT_EQ(k.status, KernelStatus::Exact);
    for (const auto& [plus, minus] : k.pairs) {
        EXPECT_FALSE(plus.is_zero());
        EXPECT_FALSE(minus.is_zero());
    }
    for (const Rational& phi : k.elements) {
        EXPECT_FALSE(membership(phi, SpaceTag::H2plus));
        EXPECT_FALSE(membership(phi, SpaceTag::H2minus));
        EXPECT_LT(quad_paired_residual(phi, p), 1e-11);
    }
}

TEST(TransposedKernel, Examples) {
    const SymbolPair p1 = make_pair(z(-2), 1.0);
    const KernelBasis k1 = transposed_kernel(p1);
    ASSERT_EQ(k1.dimension(), 2);
    for (const Rational& e : k1.elements) EXPECT_TRUE(membership(e, SpaceTag::H2plus));
    EXPECT_TRUE(proportional(k1.elements[0], 1.0));
    EXPECT_TRUE(proportional(k1.elements[1], z()));

    const KernelBasis k2 = transposed_kernel(make_pair(kA, kB));
    EXPECT_EQ(k2.status, KernelStatus::Empty);
    EXPECT_FALSE(k2.certificate.empty());

    const SymbolPair p3 = make_pair(1.0, z(2));
    const KernelBasis k3 = transposed_kernel(p3);
    ASSERT_EQ(k3.dimension(), 2);
    EXPECT_TRUE(proportional(k3.elements[0], z(-2)));
    EXPECT_TRUE(proportional(k3.elements[1], z(-1)));
    for (const Rational& e : k3.elements) EXPECT_LT(quad_sigma_residual(e, p3), 1e-13);

    EXPECT_EQ(transposed_kernel(make_pair(kA, kA)).status, KernelStatus::Empty);
}

TEST(TransposedKernel, CircleZerosOfBCutTheDimension) {
    // a/b = z^-2 and b vanishes once on the circle: only ψ = 1 of the two Toeplitz-kernel lifts
    // survives (a ψ = 1/z + 1/z^2, b ψ = z + 1), while 1/z would need b/z in H2plus.
    const SymbolPair p = make_pair(kB * z(-2), kB);
    const KernelBasis k = transposed_kernel(p);
    ASSERT_EQ(k.dimension(), 1);
    EXPECT_TRUE(proportional(k.elements[0], 1.0));
    EXPECT_FALSE(member_Sigma(z(-1), p));
    EXPECT_LT(quad_sigma_residual(k.elements[0], p), 1e-13);
    EXPECT_EQ(k.elements[0].zpk().zeros.size(), 0u);
}

TEST(Membership, Examples) {
    const SymbolPair rem = make_pair(kA, kB);
    EXPECT_TRUE(member_S(kRem, rem));
    EXPECT_FALSE(member_S(1.0, rem));
    EXPECT_FALSE(member_S(inv_lin(2.0), rem));
    EXPECT_TRUE(member_Sigma(z(), make_pair(z(-2), 1.0)));
    EXPECT_FALSE(member_Sigma(kRem, rem));
    EXPECT_TRUE(member_Sigma(z(-1), make_pair(1.0, z(2))));
    EXPECT_EQ(code_of([&] { member_S(inv_lin(1.0), rem); }), ErrorCode::PoleOnCircle);
    EXPECT_EQ(code_of([&] { member_Sigma(inv_lin(1.0), rem); }), ErrorCode::PoleOnCircle);
}

TEST(Nontriviality, PairedExamples) {
    const Nontriviality n1 = nontrivial_S(make_pair(1.0, z(3)));
    ASSERT_EQ(n1.value, Tri::True);
    EXPECT_TRUE(approx_equal(*n1.witness, 1.0 - z(-3), 1e-13));
    EXPECT_EQ(nontrivial_S(make_pair(z(), 1.0)).value, Tri::False);
    const Nontriviality n3 = nontrivial_S(make_pair(kA, kB));
    ASSERT_EQ(n3.value, Tri::True);
    EXPECT_TRUE(approx_equal(*n3.witness, kRem, 1e-13));
    EXPECT_EQ(nontrivial_S(make_pair(lin(1.0), 1.0)).value, Tri::NeedsOracle);
}

TEST(Nontriviality, TransposedExamples) {
    const Nontriviality n1 = nontrivial_Sigma(make_pair(z(-2), 1.0));
    ASSERT_EQ(n1.value, Tri::True);
    EXPECT_TRUE(proportional(*n1.witness, 1.0));
    EXPECT_EQ(nontrivial_Sigma(make_pair(kA, kB)).value, Tri::False);

    // a = 1, b = z - 1/2: a/b has index -1 and b no circle zeros, so
    // 1/(z - 1/2) lies in ker Σ (a·ψ ∈ H2minus, b·ψ = 1).
    const SymbolPair p = make_pair(1.0, lin(0.5));
    const Nontriviality n3 = nontrivial_Sigma(p);
    ASSERT_EQ(n3.value, Tri::True);
    EXPECT_TRUE(proportional(*n3.witness, inv_lin(0.5)));
    EXPECT_LT(quad_sigma_residual(*n3.witness, p), 1e-13);
    const OracleResult o = kernel_oracle(transposed(p.a, p.b), 64, 1e-10);
    EXPECT_EQ(o.dim_estimate, 1);

    EXPECT_EQ(code_of([] { nontrivial_Sigma(make_pair(kA, kA)); }), ErrorCode::DegenerateSymbol);
}

TEST(KernelsEqual, Examples) {
    const Rational eta = lin(-2.0);
    EXPECT_TRUE(kernels_equal_S(make_pair(1.0, z()), make_pair(eta, eta * z())));
    EXPECT_FALSE(kernels_equal_S(make_pair(1.0, z()), make_pair(1.0, z(2))));
    EXPECT_TRUE(kernels_equal_S(make_pair(kA, kB), make_pair(1.0, z())));
    EXPECT_EQ(code_of([] { kernels_equal_S(make_pair(z(), 1.0), make_pair(1.0, z())); }), ErrorCode::TrivialKernel);
}

TEST(SymbolsFromFunction, Examples) {
    const SymbolPair p1 = symbols_from_function(1.0, z(-1));
    EXPECT_TRUE(approx_equal(p1.a, 1.0, 1e-13));
    EXPECT_TRUE(approx_equal(p1.b, -z(), 1e-13));

    const SymbolPair p2 = symbols_from_function(inv_lin(2.0), z(-1));
    EXPECT_TRUE(member_S(inv_lin(2.0) + z(-1), p2));
    EXPECT_LT(quad_paired_residual(inv_lin(2.0) + z(-1), p2), 1e-12);

    EXPECT_EQ(code_of([] { symbols_from_function(z(), Rational{}); }), ErrorCode::DegenerateInput);
    EXPECT_EQ(code_of([] { symbols_from_function(z(-1), z(-1)); }), ErrorCode::NotInHardySpace);
}

TEST(SymbolsFromFunction, InnerFactorsOnBothSides) {
    // φ+ = z (z - 1/2)/(z - 3), φ- = (1/z^2) / (1 - 1/(4z)).
    const Rational plus = z() * lin(0.5) * inv_lin(3.0);
    const Rational minus = z(-1) * inv_lin(0.25);
    const SymbolPair p = symbols_from_function(plus, minus);
    EXPECT_TRUE(member_S(plus + minus, p));
    EXPECT_LT(quad_paired_residual(plus + minus, p), 1e-11);
    // The kernel of S_{a,b} contains φ, so it is nontrivial.
    EXPECT_NE(nontrivial_S(p).value, Tri::False);
}

TEST(JMap, Examples) {
    const SymbolPair p1 = make_pair(z(-2), 1.0);
    const Rational phi = j_map(1.0, p1, false);
    EXPECT_TRUE(approx_equal(phi, z(-2) - 1.0, 1e-13));
    EXPECT_TRUE(member_S(phi, p1));
    EXPECT_TRUE(approx_equal(j_map(phi, p1, true), 1.0, 1e-12));

    const SymbolPair p2 = make_pair(1.0, z());
    const Rational psi = j_map(kRem, p2, true, Rational(1.0), Rational{});
    EXPECT_TRUE(approx_equal(psi, -z(-1), 1e-13));
    EXPECT_TRUE(member_Sigma(psi, p2));

    EXPECT_EQ(code_of([&] { j_map(kRem, p1, false); }), ErrorCode::NotInKernel);
    EXPECT_EQ(code_of([&] { j_map(1.0, p1, true); }), ErrorCode::NotInKernel);
    EXPECT_EQ(code_of([&] { j_map(kRem, p2, true, Rational(2.0), Rational{}); }), ErrorCode::PartitionOfUnityFails);
    const SymbolPair rem = make_pair(kA, kB);
    EXPECT_EQ(code_of([&] { j_map(kRem, rem, true); }), ErrorCode::PartitionOfUnityFails);
}

TEST(SigmaInclusion, Examples) {
    const SymbolPair p = make_pair(z(-2) * inv_lin(3.0), lin(4.0));
    ASSERT_EQ(nontrivial_Sigma(p).value, Tri::True);

    const SymbolPair strict = make_pair(p.a * z(-1), p.b * z());
    EXPECT_EQ(sigma_inclusion(p, strict), Inclusion::Subset);
    EXPECT_EQ(sigma_inclusion_by_ratios(p, strict), Inclusion::Subset);

    const SymbolPair equal = make_pair(p.a * lp({0.5, 1.0}, -1), p.b * lin(-2.0));
    EXPECT_EQ(sigma_inclusion(p, equal), Inclusion::Equal);
    EXPECT_EQ(sigma_inclusion_by_ratios(p, equal), Inclusion::Equal);

    const SymbolPair k2 = make_pair(z(-2), 1.0), k1 = make_pair(z(-1), 1.0);
    EXPECT_EQ(sigma_inclusion(k2, k1), Inclusion::NoSubset);
    EXPECT_EQ(sigma_inclusion(k1, k2), Inclusion::Subset);
    EXPECT_EQ(sigma_inclusion_by_ratios(k2, k1), Inclusion::NoSubset);
    EXPECT_EQ(sigma_inclusion_by_ratios(k1, k2), Inclusion::Subset);

    EXPECT_EQ(code_of([] { sigma_inclusion(make_pair(kA, kB), make_pair(1.0, z())); }), ErrorCode::TrivialKernel);
}

TEST(ModelSpace, Examples) {
    const KernelBasis k1 = model_space_basis(z(3));
    ASSERT_EQ(k1.dimension(), 3);
    for (int i = 0; i < 3; ++i) EXPECT_TRUE(approx_equal(k1.elements[i], z(i), 1e-15));

    const Rational b = -2.0 * lin(0.5) * inv_lin(2.0);  // (z - 1/2)/(1 - z/2)
    const KernelBasis k2 = model_space_basis(z() * b);
    ASSERT_EQ(k2.dimension(), 2);
    EXPECT_TRUE(approx_equal(k2.elements[0], 1.0, 1e-14));
    EXPECT_TRUE(approx_equal(k2.elements[1], -2.0 * z() * inv_lin(2.0), 1e-14));

    const KernelBasis k3 = model_space_basis(b);
    ASSERT_EQ(k3.dimension(), 1);
    EXPECT_TRUE(approx_equal(k3.elements[0], -2.0 * inv_lin(2.0), 1e-14));

    EXPECT_EQ(code_of([] { model_space_basis(lin(0.5)); }), ErrorCode::NotInner);
}

TEST(ModelSpace, MatchesTransposedKernel) {
    const Rational theta = z(2) * lin(0.3) * inv_lin(1.0 / 0.3) * lin(cplx(0, 0.5)) * inv_lin(cplx(0, 2.0));
    const KernelBasis m = model_space_basis(theta / theta(1.0));
    const SymbolPair p = make_pair((theta / theta(1.0)).circle_conjugate(), 1.0);
    const KernelBasis t = transposed_kernel(p);
    ASSERT_EQ(m.dimension(), 4);
    ASSERT_EQ(t.dimension(), 4);
    for (const Rational& e : t.elements) EXPECT_LT(quad_sigma_residual(e, p), 1e-12);
    const OracleResult o = kernel_oracle(transposed(p.a, p.b), 64, 1e-10);
    EXPECT_EQ(o.dim_estimate, 4);
    EXPECT_LT(principal_angle(m.elements, o), 1e-7);
    EXPECT_LT(principal_angle(t.elements, o), 1e-7);
}

TEST(Oracle, Examples) {
    const OracleResult o1 = kernel_oracle(paired(1.0, z()), 64, 1e-10);
    EXPECT_EQ(o1.dim_estimate, 1);
    EXPECT_TRUE(o1.stable);
    EXPECT_LT(principal_angle({kRem}, o1), 1e-8);

    EXPECT_EQ(kernel_oracle(transposed(kA, kB), 64, 1e-10).dim_estimate, 0);
    EXPECT_EQ(kernel_oracle(toeplitz(z()), 64, 1e-10).dim_estimate, 0);
    EXPECT_EQ(kernel_oracle(toeplitz(z(-3)), 64, 1e-10).dim_estimate, 3);
    EXPECT_EQ(code_of([] { kernel_oracle(toeplitz(z(-3)), 5, 1e-10); }), ErrorCode::WindowOverflow);
}

TEST(KernelJson, Shape) {
    const KernelBasis k = paired_kernel(make_pair(1.0, z()));
    const auto j = to_json(k, {true});
    EXPECT_EQ(j["status"], "exact");
    EXPECT_EQ(j["dimension"], 1);
    EXPECT_EQ(j["basis"].size(), 1u);
    EXPECT_EQ(j["witness_checks"][0], true);
    EXPECT_EQ(j["pairs"].size(), 1u);
    EXPECT_EQ(to_json(transposed_kernel(make_pair(kA, kB)), {})["status"], "empty");
}

TEST(KernelProperties, RandomRegularPairs) {
    std::mt19937_64 rng(20261019);
    int nontrivial_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const SymbolPair p = make_pair(random_symbol(rng), random_symbol(rng));
        const SymbolPair q = make_pair(p.b, p.a);
        const Nontriviality s = nontrivial_S(p), sr = nontrivial_S(q);
        const Nontriviality t = nontrivial_Sigma(p), tr = nontrivial_Sigma(q);
        EXPECT_FALSE(s.value == Tri::True && sr.value == Tri::True) << trial;
        EXPECT_FALSE(t.value == Tri::True && tr.value == Tri::True) << trial;
        if (t.value == Tri::True) EXPECT_EQ(s.value, Tri::True) << trial;

        const KernelBasis kt = toeplitz_kernel(p.a / p.b);
        const KernelBasis ks = paired_kernel(p);
        const KernelBasis kx = transposed_kernel(p);
        // b has no circle zeros here, so all three kernels have the same dimension.
        EXPECT_EQ(ks.dimension(), kt.dimension()) << trial;
        EXPECT_EQ(kx.dimension(), kt.dimension()) << trial;
        nontrivial_seen += kt.dimension() > 0;

        for (const Rational& e : kx.elements) {
            EXPECT_LT(quad_sigma_residual(e, p), 1e-10) << trial;
            // b ker Σ ⊆ ker T_{a/b}
            EXPECT_LE(residual_Sigma(p.b * e, make_pair(p.a / p.b, 1.0)), 1e-11) << trial;
        }
        for (const Rational& phi : ks.elements) EXPECT_LT(quad_paired_residual(phi, p), 1e-10) << trial;

        const Rational eta = random_symbol(rng, 2);
        if (circle_regular(eta)) {
            const SymbolPair pe = make_pair(p.a * eta, p.b * eta);
            for (const Rational& phi : ks.elements) EXPECT_TRUE(member_S(phi, pe)) << trial;
        }

        if (bandwidth(transposed(p.a, p.b)) <= 16) {
            const OracleResult o = kernel_oracle(transposed(p.a, p.b), 64, 1e-10);
            EXPECT_EQ(o.dim_estimate, kx.dimension()) << trial;
            EXPECT_LT(principal_angle(kx.elements, o), 1e-7) << trial;
            const OracleResult os = kernel_oracle(paired(p.a, p.b), 64, 1e-10);
            EXPECT_EQ(os.dim_estimate, ks.dimension()) << trial;
            EXPECT_LT(principal_angle(ks.elements, os), 1e-7) << trial;
        }
    }
    EXPECT_GT(nontrivial_seen, 5);
}
