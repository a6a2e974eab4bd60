#pragma once

#include <string>

#include "json.hpp"
#include "pairedk/riesz.hpp"

namespace pairedk {

/// f = inner * outer. On the plus side inner is z^k times a normalized Blaschke
/// product and outer is zero-free in the open disc. On the minus side inner is
/// the conjugate of an inner function and z̄ conj(outer) is outer in H2plus.
struct InnerOuterPair {
    Rational inner;
    Rational outer;
    Side side = Side::Plus;
};

InnerOuterPair inner_outer(const Rational& f, Side side);

/// Zeros inside minus poles inside plus the monomial power.
int winding_index(const Rational& g);

/// g = g_minus * z^kappa * g_plus with g_plus^{±1} in H∞ and g_minus^{±1} in conj(H∞).
struct WHFactorization {
    Rational g_minus;
    int kappa = 0;
    Rational g_plus;
};

WHFactorization wiener_hopf(const Rational& g);

nlohmann::json to_json(const WHFactorization& wh);
nlohmann::json to_json(const InnerOuterPair& io);

}  // namespace pairedk
