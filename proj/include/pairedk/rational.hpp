#pragma once

#include <optional>
#include <vector>

#include "pairedk/laurent.hpp"
#include "pairedk/roots.hpp"

namespace pairedk {

/// Zero-pole-gain data: f(z) = gain * z^zpow * prod (z - zero)^m / prod (z - pole)^n,
/// with every listed zero and pole nonzero.
struct Zpk {
    cplx gain;
    int zpow = 0;
    std::vector<Root> zeros;
    std::vector<Root> poles;
};

/// A rational function on the unit circle.
///
/// Stored as a Laurent numerator over a monic product of (z - p)^m with p != 0;
/// a pole at the origin lives in the negative exponents of the numerator.
/// Values are immutable once built; every operation returns a new symbol.
class Rational {
public:
    Rational() = default;
    Rational(cplx c);          // NOLINT(google-explicit-constructor)
    Rational(double c) : Rational(cplx(c)) {}  // NOLINT(google-explicit-constructor)
    Rational(LaurentPoly p);   // NOLINT(google-explicit-constructor)

    /// num / prod (z - p)^m; clusters poles and cancels common roots.
    static Rational from_parts(LaurentPoly num, std::vector<Root> poles,
                               std::optional<std::vector<Root>> zeros = std::nullopt);
    static Rational from_zpk(const Zpk& zpk);
    /// Normalized quotient of two Laurent polynomials (throws ZeroDenominator).
    static Rational ratio(const LaurentPoly& num, const LaurentPoly& den);

    static Rational z(int k = 1) { return Rational(LaurentPoly::monomial(k)); }

    const LaurentPoly& num() const { return num_; }
    const std::vector<Root>& poles() const { return poles_; }
    bool zeros_known() const { return zeros_.has_value(); }

    /// Zero-pole-gain form; zeros come from the stored set or from poly_roots.
    Zpk zpk() const;
    /// Dense monic denominator prod (z - p)^m over the nonzero poles.
    std::vector<cplx> denominator() const;
    int pole_degree() const;  // sum of multiplicities of nonzero poles

    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return poles_.empty(); }
    bool is_constant() const;
    bool has_pole(Location loc) const;

    cplx operator()(cplx z) const;

    Rational circle_conjugate() const;
    Rational reciprocal() const;
    Rational shifted(int k) const;  // z^k * this

    friend Rational operator+(const Rational& f, const Rational& g);
    friend Rational operator-(const Rational& f, const Rational& g);
    friend Rational operator*(const Rational& f, const Rational& g);
    friend Rational operator/(const Rational& f, const Rational& g);
    Rational operator-() const;

private:
    LaurentPoly num_;
    std::vector<Root> poles_;
    std::optional<std::vector<Root>> zeros_;  // nonzero zeros of num_, when known exactly
};

/// Deterministic probe points exp(i(2 pi k / n + offset)) on the unit circle.
std::vector<cplx> circle_probes(int n = 16);

/// Number of probes that pins down rational functions of this size.
int probe_count(const Rational& f);

/// max_k |f(z_k)| on the circle probes, the reference scale for identities.
double probe_max(const Rational& f, int n = 16);

/// f == g within relative tolerance tol at the circle probes.
bool approx_equal(const Rational& f, const Rational& g, double tol);
/// max_k |r(z_k)| <= tol * reference.
bool approx_zero(const Rational& r, double reference, double tol);

/// ess sup |f| on the circle (dense sampling plus golden-section refinement).
double sup_norm(const Rational& f);

}  // namespace pairedk
