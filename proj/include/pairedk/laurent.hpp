#pragma once

#include <map>
#include <vector>

#include "pairedk/tolerances.hpp"

namespace pairedk {

/// Sparse Laurent polynomial sum_k c_k z^k with a finite set of exponents.
///
/// Coefficients whose modulus falls below the pruning threshold are never
/// stored, so the zero polynomial is the empty map.
class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(std::map<int, cplx> coeffs);
    LaurentPoly(cplx constant);  // NOLINT(google-explicit-constructor)

    static LaurentPoly monomial(int k, cplx c = 1.0);
    /// Dense coefficients c[0..n) as the polynomial sum c[i] z^(lo + i).
    static LaurentPoly from_dense(const std::vector<cplx>& c, int lo = 0);

    bool is_zero() const { return coeffs_.empty(); }
    int lo() const;  // 0 for the zero polynomial
    int hi() const;  // 0 for the zero polynomial
    const std::map<int, cplx>& coeffs() const { return coeffs_; }
    cplx coeff(int k) const;
    double max_abs() const;
    double l1_norm() const;

    /// Coefficients c[lo..hi] as a dense vector (index 0 is exponent lo()).
    std::vector<cplx> dense() const;

    cplx operator()(cplx z) const;
    /// Sum of |c_k| |z|^k, the natural scale for rounding in operator().
    double magnitude_at(cplx z) const;

    LaurentPoly shifted(int k) const;  // z^k * this
    LaurentPoly derivative() const;
    /// Index negation plus conjugation: the function conj(p(z)) on the circle.
    LaurentPoly circle_conjugate() const;
    /// Keeps exponents k with lo_keep <= k <= hi_keep.
    LaurentPoly restricted(int lo_keep, int hi_keep) const;

    LaurentPoly pruned(double reference) const;

    friend LaurentPoly operator+(const LaurentPoly& f, const LaurentPoly& g);
    friend LaurentPoly operator-(const LaurentPoly& f, const LaurentPoly& g);
    friend LaurentPoly operator*(const LaurentPoly& f, const LaurentPoly& g);
    friend LaurentPoly operator*(cplx s, const LaurentPoly& f);
    LaurentPoly operator-() const;

    /// Synthetic division by (z - root) of the polynomial part z^-lo * p, run
    /// from the end that is stable for this root;
    /// the remainder is discarded and returned through `remainder`.
    LaurentPoly divided_by_linear(cplx root, cplx* remainder = nullptr) const;

    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

private:
    void prune(double reference);

    std::map<int, cplx> coeffs_;
};

/// Dense polynomial helpers; vectors are ascending-power coefficient lists.
namespace dense {

std::vector<cplx> multiply(const std::vector<cplx>& p, const std::vector<cplx>& q);
/// prod (z - r)^m over the given roots, monic.
std::vector<cplx> from_roots(const std::vector<std::pair<cplx, int>>& roots);
/// Taylor coefficients of p around z0 up to (and including) order `order`.
std::vector<cplx> taylor_shift(const std::vector<cplx>& p, cplx z0, int order);
cplx evaluate(const std::vector<cplx>& p, cplx z);

}  // namespace dense

}  // namespace pairedk
