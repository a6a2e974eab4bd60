#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pairedk/factorization.hpp"
#include "pairedk/operators.hpp"

namespace pairedk {

/// Symbols of S_{a,b} / Σ_{a,b}: bounded, neither identically zero.
struct SymbolPair {
    Rational a;
    Rational b;
    bool nondegenerate = true;  // a != b
};

/// Throws SymbolNotBounded for circle poles and DegenerateSymbol for a zero symbol.
SymbolPair make_pair(const Rational& a, const Rational& b);

enum class KernelStatus { Exact, Empty, NeedsOracle };
std::string_view to_string(KernelStatus s);

struct KernelBasis {
    KernelStatus status = KernelStatus::Empty;
    std::vector<Rational> elements;
    /// Paired kernels also list (φ₊, φ₋) with elements[i] = φ₊ + φ₋.
    std::vector<std::pair<Rational, Rational>> pairs;
    std::string certificate;  // why the kernel is trivial or not enumerated
    int dimension() const { return static_cast<int>(elements.size()); }
};

enum class Tri { False, True, NeedsOracle };
std::string_view to_string(Tri t);

struct Nontriviality {
    Tri value = Tri::False;
    std::optional<Rational> witness;
    std::string certificate;
};

/// True when g has no zeros or poles on the circle.
bool circle_regular(const Rational& g);

KernelBasis toeplitz_kernel(const Rational& g);
KernelBasis paired_kernel(const SymbolPair& p);
KernelBasis transposed_kernel(const SymbolPair& p);

/// max |a P⁺f + b P⁻f| on the probes relative to the larger of the two terms.
double residual_S(const Rational& f, const SymbolPair& p);
/// Relative size of P⁺(af) and P⁻(bf).
double residual_Sigma(const Rational& f, const SymbolPair& p);
bool member_S(const Rational& f, const SymbolPair& p);
bool member_Sigma(const Rational& f, const SymbolPair& p);

Nontriviality nontrivial_S(const SymbolPair& p);
Nontriviality nontrivial_Sigma(const SymbolPair& p);

/// a b̃ == ã b; TrivialKernel unless ker S_p is known to be nonzero.
bool kernels_equal_S(const SymbolPair& p, const SymbolPair& q);

/// The unique pair with φ₊ + φ₋ in ker S_{a,b}, built from inner-outer data.
SymbolPair symbols_from_function(const Rational& phi_plus, const Rational& phi_minus);

/// Forward: ψ ↦ (a - b)ψ. Inverse: φ ↦ a'P⁻φ - b'P⁺φ; a', b' default to the
/// partition of unity from an invertible b (or a).
Rational j_map(const Rational& psi, const SymbolPair& p, bool inverse, const std::optional<Rational>& a_prime = std::nullopt,
               const std::optional<Rational>& b_prime = std::nullopt);

enum class Inclusion { Subset, Equal, NoSubset, Unknown };
std::string_view to_string(Inclusion i);

/// Decides ker Σ_p ⊆ ker Σ_q (Subset means strict).
Inclusion sigma_inclusion(const SymbolPair& p, const SymbolPair& q);

/// Ratio test: ã/a free of poles in |z| > 1 and at ∞, b̃/b free of poles in |z| < 1.
/// Strict when ã/a has zeros there or b̃/b has zeros in the disc.
Inclusion sigma_inclusion_by_ratios(const SymbolPair& p, const SymbolPair& q);

/// Takenaka-Malmquist basis of K_θ (NotInner unless θ is inner).
KernelBasis model_space_basis(const Rational& theta);

struct OracleResult {
    int dim_estimate = 0;
    double gap = 0.0;
    bool stable = true;  // same estimate at N/2
    int window_lo = 0;   // candidates are coefficient vectors on window_lo..window_hi
    int window_hi = -1;
    Eigen::MatrixXcd candidates;
};

/// Numerical kernel of the truncation with the outermost `bandwidth` columns
/// at artificial window edges excluded. Indeterminate when the gap is below min_gap.
OracleResult kernel_oracle(const Op& x, int N, double tol);

/// Sine of the largest principal angle between span(exact) restricted to the
/// oracle window and span(candidates); 1 when the dimensions differ.
double principal_angle(const std::vector<Rational>& exact, const OracleResult& oracle);

nlohmann::json to_json(const KernelBasis& k, const std::vector<bool>& witness_checks);

}  // namespace pairedk
