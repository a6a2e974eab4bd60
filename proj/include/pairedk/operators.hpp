#pragma once

#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "pairedk/riesz.hpp"

namespace pairedk {

enum class OpKind {
    Paired,
    Transposed,
    Toeplitz,
    DualToeplitz,
    Hankel,
    HankelTilde,
    Mult,
    ProjPlus,
    ProjMinus,
    Compose,
    Sum,
    Scale,
    Commutator,
};

std::string_view to_string(OpKind kind);

/// Domains and codomains are tracked as L2, H2plus or H2minus.
struct OpNode;
using Op = std::shared_ptr<const OpNode>;

struct OpNode {
    OpKind kind;
    Rational a;  // Paired/Transposed first symbol, or the single symbol
    Rational b;
    cplx lambda{1.0};
    Op x;  // Compose(x, y) applies y first
    Op y;
    SpaceTag domain = SpaceTag::L2;
    SpaceTag codomain = SpaceTag::L2;
    bool nondegenerate = true;  // Paired/Transposed: a != b
};

// Builders validate symbols (SymbolNotBounded) and domain tags (DomainMismatch).
// There is no Adjoint node: adjoint() pushes the conjugation down to the leaves.
Op paired(const Rational& a, const Rational& b);
Op transposed(const Rational& a, const Rational& b);
Op toeplitz(const Rational& a);
Op dual_toeplitz(const Rational& a);
Op hankel(const Rational& a);
Op hankel_tilde(const Rational& a);
Op mult(const Rational& eta);
Op proj_plus();
Op proj_minus();
Op compose(Op x, Op y);
Op sum(Op x, Op y);
Op scale(cplx lambda, Op x);
Op difference(Op x, Op y);
Op adjoint(const Op& x);
Op commutator(Op x, Op y);

Op op_from_json(const nlohmann::json& j);
nlohmann::json op_to_json(const Op& x);

/// Exact image of f; f must lie in the domain of X.
Rational apply_exact(const Op& x, const Rational& f);

/// Polynomial bandwidth: exponent span plus pole degree, summed along products.
int bandwidth(const Op& x);

/// Rectangular truncation. Column j is the coefficient vector of the image of
/// z^(in_lo + j) on the rows out_lo..out_hi; rational tails are kept until
/// they fall below 1e-17 of the coefficient scale, so nothing is clipped.
struct TruncationMatrix {
    Eigen::MatrixXcd entries;
    int in_lo = 0, in_hi = -1;
    int out_lo = 0, out_hi = -1;
    /// Largest Frobenius norm met during assembly; singular values below
    /// eps_drop * scale are cancellation residue.
    double scale = 0.0;
};

/// Input window [-N..N], [0..N] or [-N..-1] according to the domain of X.
TruncationMatrix truncate(const Op& x, int N);

/// Coefficients of f on the window lo..hi.
Eigen::VectorXcd coefficient_vector(const Rational& f, int lo, int hi);

struct RankResult {
    int rank = 0;
    double gap = 0.0;  // sigma_last_kept / sigma_first_discarded
    bool determinate = true;
    std::vector<double> singular_values;
};

/// Singular values above max(tol * sigma_max, noise); determinate when the gap is >= min_gap.
RankResult rank_from_singular_values(const Eigen::VectorXd& s, double tol, double noise);
RankResult numerical_rank(const Eigen::MatrixXcd& m, double tol, double noise = 0.0);
RankResult numerical_rank(const TruncationMatrix& m, double tol);

/// Largest singular value of the truncation: a lower bound for ||X||.
double operator_norm(const Op& x, int N);

/// max |<Xf, g> - <f, Yg>| over the probe pairs.
double adjoint_residual(const Op& x, const Op& y, const std::vector<std::pair<Rational, Rational>>& probes);

/// Probe pairs (z^j, z^k) for |j|, |k| <= K.
std::vector<std::pair<Rational, Rational>> monomial_probes(int K);

}  // namespace pairedk
