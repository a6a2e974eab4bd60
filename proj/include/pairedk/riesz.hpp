#pragma once

#include <string_view>
#include <vector>

#include "pairedk/rational.hpp"

namespace pairedk {

enum class Side { Plus, Minus };

enum class SpaceTag { L2, H2plus, H2minus, Hinf, HinfBar, InnerPlus, OuterPlus, OuterMinus };

std::string_view to_string(SpaceTag tag);

/// Coefficients c[k-1] of (z - pole)^-k in the principal part at a nonzero pole.
struct PrincipalPart {
    cplx pole;
    Location loc;
    std::vector<cplx> c;
};

/// f = z^-shift N(z) / D(z) with N a polynomial and D the monic denominator.
///
/// Coefficients are the convolution of N with the series of 1/D (whose
/// principal parts are `recip`); `parts` are the principal parts of N/D at the
/// nonzero poles. Neither route forms the polynomial part of N/D, whose terms
/// can be far larger than f itself.
struct PartialFractions {
    int shift = 0;
    std::vector<cplx> numer;
    std::vector<PrincipalPart> recip;
    std::vector<PrincipalPart> parts;

    cplx coefficient(int k) const;
    /// Coefficients for k = kmin..kmax.
    std::vector<cplx> coefficients(int kmin, int kmax) const;
    /// K such that every |coefficient(k)|, |k| > K, is below tail times the coefficient bound.
    int tail_index(double tail) const;
};

PartialFractions partial_fractions(const Rational& f);

/// k-th Fourier coefficient on the circle (PoleOnCircle if f has circle poles).
cplx fourier_coefficient(const Rational& f, int k);

/// Riesz projection: Plus keeps nonnegative modes, Minus the strictly negative ones.
Rational riesz_project(const Rational& f, Side side);

bool membership(const Rational& f, SpaceTag space);

/// <f, g> = sum_k f_k conj(g_k) on L2 of the circle.
cplx inner_product(const Rational& f, const Rational& g);
double l2_norm(const Rational& f);

/// L2 distance computed from the two coefficient sequences separately, so an
/// identity f == g is checked without forming the difference symbolically.
double l2_distance(const Rational& f, const Rational& g);

/// num / den with common roots cancelled (ZeroDenominator when den == 0).
Rational rf_normalize(const LaurentPoly& num, const LaurentPoly& den);

}  // namespace pairedk
