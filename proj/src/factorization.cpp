#include "pairedk/factorization.hpp"

#include <cmath>

#include "pairedk/error.hpp"
#include "pairedk/symbol_json.hpp"

namespace pairedk {

namespace {

void require_regular(const Zpk& z) {
    for (const auto& r : z.zeros)
        if (r.loc == Location::On) throw Error(ErrorCode::ZeroOrPoleOnCircle, "zero on the unit circle");
    for (const auto& r : z.poles)
        if (r.loc == Location::On) throw Error(ErrorCode::ZeroOrPoleOnCircle, "pole on the unit circle");
}

InnerOuterPair inner_outer_plus(const Rational& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroFunction, "inner-outer of the zero function");
    if (!membership(f, SpaceTag::H2plus)) throw Error(ErrorCode::NotInHardySpace, "function is not in H2plus");
    const Zpk z = f.zpk();

    Zpk inner{1.0, z.zpow, {}, {}};
    Zpk outer{z.gain, 0, {}, z.poles};
    for (const auto& r : z.zeros) {
        if (r.loc != Location::Inside) {
            outer.zeros.push_back(r);
            continue;
        }
        // (z - a) = b_a(z) (1 - conj(a) z) = b_a(z) (-conj(a)) (z - 1/conj(a))
        const cplx a = r.value;
        const cplx refl = 1.0 / std::conj(a);
        inner.zeros.push_back(r);
        inner.poles.push_back({refl, r.multiplicity, Location::Outside});
        inner.gain *= std::pow(-1.0 / std::conj(a), r.multiplicity);
        outer.zeros.push_back({refl, r.multiplicity, Location::Outside});
        outer.gain *= std::pow(-std::conj(a), r.multiplicity);
    }
    return {Rational::from_zpk(inner), Rational::from_zpk(outer), Side::Plus};
}

}  // namespace

InnerOuterPair inner_outer(const Rational& f, Side side) {
    if (side == Side::Plus) return inner_outer_plus(f);
    if (f.is_zero()) throw Error(ErrorCode::ZeroFunction, "inner-outer of the zero function");
    if (!membership(f, SpaceTag::H2minus)) throw Error(ErrorCode::NotInHardySpace, "function is not in H2minus");
    // u = z̄ conj(f) lies in H2plus; f = z̄ conj(u) = conj(I_u) * z̄ conj(O_u).
    const InnerOuterPair u = inner_outer_plus(f.circle_conjugate().shifted(-1));
    return {u.inner.circle_conjugate(), u.outer.circle_conjugate().shifted(-1), Side::Minus};
}

int winding_index(const Rational& g) {
    if (g.is_zero()) throw Error(ErrorCode::ZeroOrPoleOnCircle, "zero function has no index");
    const Zpk z = g.zpk();
    require_regular(z);
    int k = z.zpow;
    for (const auto& r : z.zeros)
        if (r.loc == Location::Inside) k += r.multiplicity;
    for (const auto& r : z.poles)
        if (r.loc == Location::Inside) k -= r.multiplicity;
    return k;
}

WHFactorization wiener_hopf(const Rational& g) {
    if (g.is_zero()) throw Error(ErrorCode::ZeroOrPoleOnCircle, "zero function has no factorization");
    const Zpk z = g.zpk();
    require_regular(z);

    // Each inside root a contributes (z - a) = z (1 - a/z); the z moves to kappa.
    Zpk minus{1.0, 0, {}, {}};
    Zpk plus{z.gain, 0, {}, {}};
    int kappa = z.zpow;
    for (const auto& r : z.zeros) {
        if (r.loc == Location::Inside) {
            minus.zeros.push_back(r);
            minus.zpow -= r.multiplicity;
            kappa += r.multiplicity;
        } else {
            plus.zeros.push_back(r);
        }
    }
    for (const auto& r : z.poles) {
        if (r.loc == Location::Inside) {
            minus.poles.push_back(r);
            minus.zpow += r.multiplicity;
            kappa -= r.multiplicity;
        } else {
            plus.poles.push_back(r);
        }
    }
    WHFactorization wh{Rational::from_zpk(minus), kappa, Rational::from_zpk(plus)};

    const double eq = tolerances().eps_eq;
    if (!approx_equal(wh.g_minus * Rational::z(kappa) * wh.g_plus, g, eq) ||
        !membership(wh.g_plus, SpaceTag::Hinf) || !membership(wh.g_plus.reciprocal(), SpaceTag::Hinf) ||
        !membership(wh.g_minus, SpaceTag::HinfBar) || !membership(wh.g_minus.reciprocal(), SpaceTag::HinfBar))
        throw Error(ErrorCode::ZeroOrPoleOnCircle, "factorization could not be certified");
    return wh;
}

nlohmann::json to_json(const WHFactorization& wh) {
    return {{"g_minus", symbol_to_json(wh.g_minus)}, {"kappa", wh.kappa}, {"g_plus", symbol_to_json(wh.g_plus)}};
}

nlohmann::json to_json(const InnerOuterPair& io) {
    return {{"inner", symbol_to_json(io.inner)},
            {"outer", symbol_to_json(io.outer)},
            {"side", io.side == Side::Plus ? "plus" : "minus"},
            {"convention", io.side == Side::Plus ? "outer zero-free in the open disc"
                                                 : "conj(z) conj(outer) outer in H2plus"}};
}

}  // namespace pairedk
