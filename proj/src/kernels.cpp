#include "pairedk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pairedk/error.hpp"
#include "pairedk/svd.hpp"
#include "pairedk/symbol_json.hpp"

namespace pairedk {

namespace {

double eq_tol() { return tolerances().eps_eq; }

bool same_symbol(const Rational& f, const Rational& g) { return approx_equal(f, g, eq_tol()); }

void require_nonzero(const SymbolPair& p) {
    if (p.a.is_zero() || p.b.is_zero()) throw Error(ErrorCode::DegenerateSymbol, "symbol is identically zero");
}

int circle_zero_count(const Rational& f) {
    int n = 0;
    for (const auto& r : f.zpk().zeros)
        if (r.loc == Location::On) n += r.multiplicity;
    return n;
}

/// f with its circle zeros removed: f / prod (z - t)^m over |t| = 1.
Rational without_circle_zeros(const Rational& f) {
    Zpk z = f.zpk();
    std::erase_if(z.zeros, [](const Root& r) { return r.loc == Location::On; });
    return Rational::from_zpk(z);
}

/// max over the probes of |f + g| relative to max(|f|, |g|).
double relative_sum(const Rational& f, const Rational& g) {
    const int n = std::max({probe_count(f), probe_count(g), 16});
    double num = 0.0, ref = 0.0;
    for (const cplx z : circle_probes(n)) {
        const cplx u = f(z), v = g(z);
        num = std::max(num, std::abs(u + v));
        ref = std::max({ref, std::abs(u), std::abs(v)});
    }
    return ref == 0.0 ? 0.0 : num / ref;
}

double relative_part(const Rational& f, Side side) {
    if (f.is_zero()) return 0.0;
    const Rational part = riesz_project(f, side);
    const int n = std::max({probe_count(f), probe_count(part), 16});
    const double ref = probe_max(f, n);
    return ref == 0.0 ? 0.0 : probe_max(part, n) / ref;
}

/// Data behind ker Σ_{a,b} = (1/b) ker T_{a/b} ∩ L2 for circle-regular a/b.
struct SigmaData {
    bool regular = false;
    int n = 0;           // dim ker T_{a/b}
    int circle_zeros = 0;  // zeros of b on the circle, with multiplicity
    Rational base;       // 1 / (g_plus * b with its circle zeros removed)
};

SigmaData sigma_data(const SymbolPair& p) {
    SigmaData d;
    const Rational g = p.a / p.b;
    if (!circle_regular(g)) return d;
    d.regular = true;
    const WHFactorization wh = wiener_hopf(g);
    d.n = std::max(0, -wh.kappa);
    d.circle_zeros = circle_zero_count(p.b);
    d.base = (wh.g_plus * without_circle_zeros(p.b)).reciprocal();
    return d;
}

void verify(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::Indeterminate, std::string(what) + " failed its exact membership check");
}

}  // namespace

std::string_view to_string(KernelStatus s) {
    switch (s) {
        case KernelStatus::Exact: return "exact";
        case KernelStatus::Empty: return "empty";
        case KernelStatus::NeedsOracle: return "needs_oracle";
    }
    return "?";
}

std::string_view to_string(Tri t) {
    switch (t) {
        case Tri::False: return "false";
        case Tri::True: return "true";
        case Tri::NeedsOracle: return "needs_oracle";
    }
    return "?";
}

std::string_view to_string(Inclusion i) {
    switch (i) {
        case Inclusion::Subset: return "subset";
        case Inclusion::Equal: return "equal";
        case Inclusion::NoSubset: return "no_subset";
        case Inclusion::Unknown: return "unknown";
    }
    return "?";
}

SymbolPair make_pair(const Rational& a, const Rational& b) {
    for (const Rational* s : {&a, &b})
        if (s->has_pole(Location::On)) throw Error(ErrorCode::SymbolNotBounded, "symbol has a pole on the unit circle");
    SymbolPair p{a, b, true};
    require_nonzero(p);
    p.nondegenerate = !same_symbol(a, b);
    return p;
}

bool circle_regular(const Rational& g) {
    if (g.is_zero()) return false;
    const Zpk z = g.zpk();
    auto on = [](const Root& r) { return r.loc == Location::On; };
    return std::none_of(z.zeros.begin(), z.zeros.end(), on) && std::none_of(z.poles.begin(), z.poles.end(), on);
}

KernelBasis toeplitz_kernel(const Rational& g) {
    if (g.is_zero()) throw Error(ErrorCode::DegenerateSymbol, "Toeplitz symbol is identically zero");
    KernelBasis k;
    if (!circle_regular(g)) {
        k.status = KernelStatus::NeedsOracle;
        k.certificate = "symbol has zeros or poles on the unit circle";
        return k;
    }
    const WHFactorization wh = wiener_hopf(g);
    if (wh.kappa >= 0) {
        k.certificate = "winding index " + std::to_string(wh.kappa) + " >= 0";
        return k;
    }
    k.status = KernelStatus::Exact;
    const Rational inv = wh.g_plus.reciprocal();
    for (int j = 0; j < -wh.kappa; ++j) {
        Rational e = inv.shifted(j);
        verify(relative_part(g * e, Side::Plus) <= eq_tol(), "Toeplitz kernel element");
        k.elements.push_back(std::move(e));
    }
    return k;
}

KernelBasis paired_kernel(const SymbolPair& p) {
    require_nonzero(p);
    const Rational g = p.a / p.b;
    KernelBasis t = toeplitz_kernel(g);
    KernelBasis k;
    k.status = t.status;
    k.certificate = t.certificate;
    for (const Rational& plus : t.elements) {
        Rational minus = -(g * plus);
        if (!membership(minus, SpaceTag::H2minus)) continue;
        Rational phi = plus + minus;
        verify(residual_S(phi, p) <= eq_tol(), "paired kernel element");
        k.pairs.emplace_back(plus, std::move(minus));
        k.elements.push_back(std::move(phi));
    }
    if (k.status == KernelStatus::Exact && k.elements.empty()) k.status = KernelStatus::Empty;
    return k;
}

KernelBasis transposed_kernel(const SymbolPair& p) {
    require_nonzero(p);
    KernelBasis k;
    if (!p.nondegenerate) {
        k.certificate = "a = b: af would lie in H2plus and H2minus";
        return k;
    }
    const SigmaData d = sigma_data(p);
    if (!d.regular) {
        k.status = KernelStatus::NeedsOracle;
        k.certificate = "a/b has zeros or poles on the unit circle";
        return k;
    }
    if (d.n == 0) {
        k.certificate = "ker T_{a/b} = {0}";
        return k;
    }
    if (d.n <= d.circle_zeros) {
        k.certificate = "O+/b is not in L2: b has " + std::to_string(d.circle_zeros) +
                        " circle zeros against dim ker T_{a/b} = " + std::to_string(d.n);
        return k;
    }
    k.status = KernelStatus::Exact;
    for (int i = 0; i < d.n - d.circle_zeros; ++i) {
        Rational e = d.base.shifted(i);
        verify(membership(e, SpaceTag::L2) && residual_Sigma(e, p) <= eq_tol(), "transposed kernel element");
        k.elements.push_back(std::move(e));
    }
    return k;
}

double residual_S(const Rational& f, const SymbolPair& p) {
    return relative_sum(p.a * riesz_project(f, Side::Plus), p.b * riesz_project(f, Side::Minus));
}

double residual_Sigma(const Rational& f, const SymbolPair& p) {
    return std::max(relative_part(p.a * f, Side::Plus), relative_part(p.b * f, Side::Minus));
}

bool member_S(const Rational& f, const SymbolPair& p) { return residual_S(f, p) <= eq_tol(); }

bool member_Sigma(const Rational& f, const SymbolPair& p) {
    if (f.has_pole(Location::On)) throw Error(ErrorCode::PoleOnCircle, "f is not in L2");
    return residual_Sigma(f, p) <= eq_tol();
}

Nontriviality nontrivial_S(const SymbolPair& p) {
    require_nonzero(p);
    const Rational g = p.a / p.b;
    Nontriviality r;
    if (!circle_regular(g)) {
        r.value = Tri::NeedsOracle;
        r.certificate = "a/b has zeros or poles on the unit circle";
        return r;
    }
    const WHFactorization wh = wiener_hopf(g);
    if (wh.kappa >= 0) {
        r.certificate = "winding index of a/b is " + std::to_string(wh.kappa) + " >= 0";
        return r;
    }
    // a/b = I- O- / O+ with O+ = 1/g+, I- = z^kappa, O- = g-.
    Rational w = wh.g_plus.reciprocal() - wh.g_minus.shifted(wh.kappa);
    verify(member_S(w, p), "witness O+ - I- O-");
    r.value = Tri::True;
    r.witness = std::move(w);
    r.certificate = "winding index of a/b is " + std::to_string(wh.kappa);
    return r;
}

Nontriviality nontrivial_Sigma(const SymbolPair& p) {
    require_nonzero(p);
    if (!p.nondegenerate) throw Error(ErrorCode::DegenerateSymbol, "a = b");
    const SigmaData d = sigma_data(p);
    Nontriviality r;
    if (!d.regular) {
        r.value = Tri::NeedsOracle;
        r.certificate = "a/b has zeros or poles on the unit circle";
        return r;
    }
    if (d.n <= d.circle_zeros) {
        r.certificate = d.n == 0 ? "ker T_{a/b} = {0}" : "O+/b is not in L2";
        return r;
    }
    verify(member_Sigma(d.base, p), "witness O+/b");
    r.value = Tri::True;
    r.witness = d.base;
    r.certificate = "dim ker T_{a/b} = " + std::to_string(d.n) + " exceeds the circle zeros of b";
    return r;
}

bool kernels_equal_S(const SymbolPair& p, const SymbolPair& q) {
    if (nontrivial_S(p).value == Tri::False) throw Error(ErrorCode::TrivialKernel, "ker S_p = {0}");
    return same_symbol(p.a * q.b, q.a * p.b);
}

SymbolPair symbols_from_function(const Rational& phi_plus, const Rational& phi_minus) {
    if (!membership(phi_plus, SpaceTag::H2plus) || !membership(phi_minus, SpaceTag::H2minus))
        throw Error(ErrorCode::NotInHardySpace, "need phi+ in H2plus and phi- in H2minus");
    if (phi_plus.is_zero() || phi_minus.is_zero())
        throw Error(ErrorCode::DegenerateInput, "a nonzero paired-kernel element has both parts nonzero");

    // Splits an outer function into H∞ numerator over H∞ denominator.
    auto split = [](const Rational& outer) {
        Zpk z = outer.zpk();
        Zpk den{1.0, 0, std::move(z.poles), {}};
        z.poles.clear();
        return std::pair{Rational::from_zpk(z), Rational::from_zpk(den)};
    };
    const InnerOuterPair plus = inner_outer(phi_plus, Side::Plus);
    // u = z̄ conj(phi-) in H2plus; O- = z̄ conj(O_u) and I- = conj(I_u).
    const InnerOuterPair u = inner_outer(phi_minus.circle_conjugate().shifted(-1), Side::Plus);
    const auto [H2, H1] = split(plus.outer);  // O+^{-1} = H1/H2
    const auto [h2, h1] = split(u.outer);     // z conj(O-^{-1}) = 1/O_u = h1/h2

    const Rational a = plus.inner.circle_conjugate() * H1 * h2.circle_conjugate();
    const Rational b = -(Rational::z() * u.inner * h1.circle_conjugate() * H2);
    SymbolPair p = make_pair(a, b);
    if (!member_S(phi_plus + phi_minus, p))
        throw Error(ErrorCode::Indeterminate, "constructed pair does not annihilate phi");
    return p;
}

Rational j_map(const Rational& psi, const SymbolPair& p, bool inverse, const std::optional<Rational>& a_prime,
               const std::optional<Rational>& b_prime) {
    if (!inverse) {
        if (!member_Sigma(psi, p)) throw Error(ErrorCode::NotInKernel, "psi is not in ker Σ_{a,b}");
        return (p.a - p.b) * psi;
    }
    if (!member_S(psi, p)) throw Error(ErrorCode::NotInKernel, "phi is not in ker S_{a,b}");
    Rational ap, bp;
    if (a_prime || b_prime) {
        ap = a_prime.value_or(Rational{});
        bp = b_prime.value_or(Rational{});
    } else if (circle_zero_count(p.b) == 0) {
        bp = p.b.reciprocal();
    } else if (circle_zero_count(p.a) == 0) {
        ap = p.a.reciprocal();
    } else {
        throw Error(ErrorCode::PartitionOfUnityFails, "neither a nor b is invertible; supply a' and b'");
    }
    for (const Rational* s : {&ap, &bp})
        if (s->has_pole(Location::On)) throw Error(ErrorCode::PartitionOfUnityFails, "a' and b' must be bounded");
    if (!same_symbol(p.a * ap + p.b * bp, Rational(1.0)))
        throw Error(ErrorCode::PartitionOfUnityFails, "a a' + b b' is not 1");
    return ap * riesz_project(psi, Side::Minus) - bp * riesz_project(psi, Side::Plus);
}

Inclusion sigma_inclusion_by_ratios(const SymbolPair& p, const SymbolPair& q) {
    const Zpk ra = (q.a / p.a).zpk();
    const Zpk rb = (q.b / p.b).zpk();
    auto count = [](const std::vector<Root>& roots, Location loc) {
        int n = 0;
        for (const auto& r : roots)
            if (r.loc == loc) n += r.multiplicity;
        return n;
    };
    auto degree = [&](const Zpk& z) {
        return z.zpow + count(z.zeros, Location::Inside) + count(z.zeros, Location::On) +
               count(z.zeros, Location::Outside) - count(z.poles, Location::Inside) -
               count(z.poles, Location::On) - count(z.poles, Location::Outside);
    };
    if (count(ra.zeros, Location::On) + count(ra.poles, Location::On) + count(rb.zeros, Location::On) +
            count(rb.poles, Location::On) > 0)
        return Inclusion::Unknown;
    // ã/a = ψ̃-/ψ- needs no poles outside the disc, including ∞; b̃/b = ψ̃+/ψ+ none inside.
    if (count(ra.poles, Location::Outside) > 0 || degree(ra) > 0) return Inclusion::NoSubset;
    if (count(rb.poles, Location::Inside) > 0 || rb.zpow < 0) return Inclusion::NoSubset;
    const bool strict = count(ra.zeros, Location::Outside) > 0 || degree(ra) < 0 ||
                        count(rb.zeros, Location::Inside) > 0 || rb.zpow > 0;
    return strict ? Inclusion::Subset : Inclusion::Equal;
}

Inclusion sigma_inclusion(const SymbolPair& p, const SymbolPair& q) {
    const Nontriviality nt = nontrivial_Sigma(p);
    if (nt.value == Tri::False) throw Error(ErrorCode::TrivialKernel, "ker Σ_p = {0}");
    if (nt.value == Tri::NeedsOracle) return Inclusion::Unknown;
    const KernelBasis kp = transposed_kernel(p);
    for (const Rational& e : kp.elements)
        if (!member_Sigma(e, q)) return Inclusion::NoSubset;
    const KernelBasis kq = transposed_kernel(q);
    if (kq.status != KernelStatus::NeedsOracle)
        return kq.dimension() == kp.dimension() ? Inclusion::Equal : Inclusion::Subset;
    const Inclusion r = sigma_inclusion_by_ratios(p, q);
    return r == Inclusion::NoSubset ? Inclusion::Unknown : r;
}

KernelBasis model_space_basis(const Rational& theta) {
    if (!membership(theta, SpaceTag::InnerPlus)) throw Error(ErrorCode::NotInner, "θ is not inner");
    const Zpk z = theta.zpk();
    KernelBasis k;
    Rational prefix(1.0);
    for (int i = 0; i < z.zpow; ++i) {
        k.elements.push_back(prefix);
        prefix = prefix.shifted(1);
    }
    for (const auto& r : z.zeros) {
        const cplx a = r.value;
        const cplx refl = 1.0 / std::conj(a);
        const Root pole{refl, 1, Location::Outside};
        // 1/(1 - conj(a) z) and the Blaschke factor (z - a)/(1 - conj(a) z).
        const Rational kern = Rational::from_parts(LaurentPoly(-refl), {pole});
        const Rational blaschke =
            Rational::from_parts((-refl) * LaurentPoly(std::map<int, cplx>{{0, -a}, {1, 1.0}}), {pole});
        for (int m = 0; m < r.multiplicity; ++m) {
            k.elements.push_back(prefix * kern);
            prefix = prefix * blaschke;
        }
    }
    const SymbolPair p = make_pair(theta.circle_conjugate(), Rational(1.0));
    for (const Rational& e : k.elements) verify(member_Sigma(e, p), "model space element");
    k.status = k.elements.empty() ? KernelStatus::Empty : KernelStatus::Exact;
    if (k.elements.empty()) k.certificate = "θ is a unimodular constant";
    return k;
}

namespace {

struct OracleCore {
    RankResult rank;
    int dim = 0;
    int c0 = 0, ncols = 0;
    TruncationMatrix t;
    Eigen::MatrixXcd v;
};

OracleCore oracle_core(const Op& x, int N, double tol) {
    OracleCore o;
    o.t = truncate(x, N);
    const int cols = static_cast<int>(o.t.entries.cols());
    const int d = std::min(bandwidth(x), N / 4);
    const bool cut_lo = x->domain != SpaceTag::H2plus;   // -N is an artificial edge
    const bool cut_hi = x->domain != SpaceTag::H2minus;  // so is N
    o.c0 = cut_lo ? d : 0;
    o.ncols = cols - o.c0 - (cut_hi ? d : 0);
    const RightSvd svd = right_svd(o.t.entries.middleCols(o.c0, o.ncols));
    o.rank = rank_from_singular_values(svd.s, tol, tolerances().eps_drop * o.t.scale);
    o.dim = o.ncols - o.rank.rank;
    o.v = svd.v;
    return o;
}

}  // namespace

OracleResult kernel_oracle(const Op& x, int N, double tol) {
    if (N < 2 * bandwidth(x)) throw Error(ErrorCode::WindowOverflow, "oracle needs N >= 2 * bandwidth");
    const OracleCore o = oracle_core(x, N, tol);
    if (!o.rank.determinate)
        throw Error(ErrorCode::Indeterminate, "singular value gap " + std::to_string(o.rank.gap) + " is below min_gap");
    OracleResult r;
    r.dim_estimate = o.dim;
    r.gap = o.rank.gap;
    r.window_lo = o.t.in_lo + o.c0;
    r.window_hi = r.window_lo + o.ncols - 1;
    r.candidates = o.v.rightCols(o.dim);
    const int half = N / 2;
    if (half >= 2 * bandwidth(x)) {
        const OracleCore h = oracle_core(x, half, tol);
        r.stable = h.rank.determinate && h.dim == o.dim;
    }
    return r;
}

double principal_angle(const std::vector<Rational>& exact, const OracleResult& oracle) {
    const auto k = static_cast<Eigen::Index>(exact.size());
    if (k != oracle.candidates.cols()) return 1.0;
    if (k == 0) return 0.0;
    const Eigen::Index rows = oracle.window_hi - oracle.window_lo + 1;
    Eigen::MatrixXcd e(rows, k);
    for (Eigen::Index j = 0; j < k; ++j)
        e.col(j) = coefficient_vector(exact[static_cast<std::size_t>(j)], oracle.window_lo, oracle.window_hi);
    auto orthonormal = [rows, k](const Eigen::MatrixXcd& m) -> Eigen::MatrixXcd {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
        return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, k);
    };
    const Eigen::MatrixXcd qe = orthonormal(e);
    const Eigen::MatrixXcd qc = orthonormal(oracle.candidates);
    const Eigen::MatrixXcd resid = qc - qe * (qe.adjoint() * qc);
    return std::min(1.0, singular_values(resid)(0));
}

nlohmann::json to_json(const KernelBasis& k, const std::vector<bool>& witness_checks) {
    nlohmann::json basis = nlohmann::json::array();
    for (const Rational& e : k.elements) basis.push_back(symbol_to_json(e));
    nlohmann::json j{{"status", to_string(k.status)},
                     {"dimension", k.dimension()},
                     {"basis", basis},
                     {"witness_checks", witness_checks}};
    if (!k.pairs.empty()) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& [plus, minus] : k.pairs)
            pairs.push_back({{"phi_plus", symbol_to_json(plus)}, {"phi_minus", symbol_to_json(minus)}});
        j["pairs"] = pairs;
    }
    if (!k.certificate.empty()) j["certificate"] = k.certificate;
    return j;
}

}  // namespace pairedk
