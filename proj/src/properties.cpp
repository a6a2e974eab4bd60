#include "pairedk/properties.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "pairedk/error.hpp"
#include "pairedk/svd.hpp"
#include "pairedk/symbol_json.hpp"

namespace pairedk {

namespace {

using Rng = std::mt19937_64;
using json = nlohmann::json;

constexpr double kIdentityTol = 1e-10;  // relative residual of an identity
constexpr double kWitnessTol = 1e-6;    // relative residual that certifies a non-identity
constexpr double kAdjointTol = 1e-12;
constexpr double kAdjointWitness = 1e-3;
constexpr int kNormN = 128;

Rational draw(Rng& rng, ClassConstraint c = ClassConstraint::None, int degree = 2, bool friendly = true) {
    SamplerProfile p;
    p.degree_bound = degree;
    p.constraint = c;
    return sample_symbol(friendly ? oracle_friendly(p) : p, rng);
}

Rational nonconstant(Rational f) { return f.is_constant() ? f.shifted(1) : f; }

cplx draw_constant(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(0.5 + 1.5 * u(rng), 2.0 * std::numbers::pi * u(rng));
}

double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

json sym(const Rational& f) { return symbol_to_json(f); }

Op identity_op() { return mult(Rational(1.0)); }
Op sandwich(const Op& left, const Rational& eta, const Op& right) { return compose(left, compose(mult(eta), right)); }

/// max |Σ lhs - Σ rhs| over circle probes, relative to the largest single term.
double identity_residual(const std::vector<Rational>& lhs, const std::vector<Rational>& rhs, double floor = 0.0) {
    int n = 32;
    for (const auto* side : {&lhs, &rhs})
        for (const Rational& t : *side) n = std::max(n, probe_count(t));
    double num = 0.0, ref = floor;
    for (const cplx z : circle_probes(n)) {
        cplx s{};
        for (const Rational& t : lhs) {
            const cplx v = t(z);
            s += v;
            ref = std::max(ref, std::abs(v));
        }
        for (const Rational& t : rhs) {
            const cplx v = t(z);
            s -= v;
            ref = std::max(ref, std::abs(v));
        }
        num = std::max(num, std::abs(s));
    }
    return ref == 0.0 ? 0.0 : num / ref;
}

/// Size of a paired operator with these symbols, up to the factor √2.
double size(const Rational& a, const Rational& b) { return std::max(probe_max(a, 256), probe_max(b, 256)); }

/// Largest identity residual of Σ lhs_i f = Σ rhs_j f over the probe functions,
/// relative to the terms and to scale·|f| (scale estimates the operator size).
double operator_identity(const std::vector<Op>& lhs, const std::vector<Op>& rhs, const std::vector<Rational>& probes,
                         double scale) {
    double worst = 0.0;
    for (const Rational& f : probes) {
        std::vector<Rational> l, r;
        for (const Op& x : lhs) l.push_back(apply_exact(x, f));
        for (const Op& x : rhs) r.push_back(apply_exact(x, f));
        worst = std::max(worst, identity_residual(l, r, scale * probe_max(f, 256)));
    }
    return worst;
}

std::vector<Rational> probe_functions(Rng& rng) {
    std::vector<Rational> out;
    for (int k = -3; k <= 3; ++k) out.push_back(Rational::z(k));
    out.push_back(draw(rng));
    out.push_back(draw(rng));
    return out;
}

/// (a, b) with dim ker T_{a/b} >= min_dim: the pair is swapped when the index
/// is positive, then a absorbs a power of z̄.
SymbolPair forced_pair(Rng& rng, int min_dim, int degree = 2, std::optional<Rational> b_fixed = std::nullopt) {
    Rational a = draw(rng, ClassConstraint::None, degree);
    Rational b = b_fixed ? *b_fixed : draw(rng, ClassConstraint::None, degree);
    int k = winding_index(a / b);
    if (k > 0 && !b_fixed) {
        std::swap(a, b);
        k = -k;
    }
    if (k > -min_dim) a = a.shifted(-(k + min_dim));
    return make_pair(a, b);
}

json pair_json(const SymbolPair& p) { return {{"a", sym(p.a)}, {"b", sym(p.b)}}; }

int minus_rank(const Rational& f) {
    const Zpk z = f.zpk();
    int r = std::max(0, -z.zpow);
    for (const auto& p : z.poles)
        if (p.loc == Location::Inside) r += p.multiplicity;
    return r;
}

int plus_rank(const Rational& f) {
    const Zpk z = f.zpk();
    int r = 0, deg = z.zpow;
    for (const auto& p : z.poles) {
        if (p.loc == Location::Outside) r += p.multiplicity;
        deg -= p.multiplicity;
    }
    for (const auto& q : z.zeros) deg += q.multiplicity;
    return r + std::max(0, deg);
}

RankResult rank_escalating(const Op& x, int N) {
    N = std::max(N, bandwidth(x));
    RankResult r = numerical_rank(truncate(x, N), tolerances().rank_tol);
    if (!r.determinate && 2 * N <= 4096) r = numerical_rank(truncate(x, 2 * N), tolerances().rank_tol);
    return r;
}

OracleResult oracle_escalating(const Op& x, int N) {
    N = std::max(N, 2 * bandwidth(x));
    try {
        return kernel_oracle(x, N, tolerances().rank_tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Indeterminate) throw;
        return kernel_oracle(x, 2 * N, tolerances().rank_tol);
    }
}

/// rank [K | XK] - rank K on a coefficient window: the defect of span K under X.
int defect(const std::vector<Rational>& k, const std::vector<Rational>& images) {
    constexpr int L = 96;
    auto stack = [](const std::vector<Rational>& fs) {
        Eigen::MatrixXcd m(2 * L + 1, static_cast<Eigen::Index>(fs.size()));
        for (std::size_t j = 0; j < fs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = coefficient_vector(fs[j], -L, L);
        return m;
    };
    std::vector<Rational> all = k;
    all.insert(all.end(), images.begin(), images.end());
    return numerical_rank(stack(all), 1e-9).rank - numerical_rank(stack(k), 1e-9).rank;
}

bool same_span_S(const KernelBasis& x, const SymbolPair& px, const KernelBasis& y, const SymbolPair& py) {
    if (x.dimension() != y.dimension()) return false;
    for (const Rational& f : x.elements)
        if (!member_S(f, py)) return false;
    for (const Rational& f : y.elements)
        if (!member_S(f, px)) return false;
    return true;
}

// ---------------------------------------------------------------- checks

TrialOutcome check_norm(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational a = draw(rng, ClassConstraint::None, 2, false), b = draw(rng, ClassConstraint::None, 2, false);
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}};
    const double sa = sup_norm(a), sb = sup_norm(b);
    const double m = std::max(sa, sb), upper = std::min(sa + sb, std::numbers::sqrt2 * m);
    const double ns = operator_norm(paired(a, b), kNormN), nt = operator_norm(transposed(a, b), kNormN);
    auto inside = [&](double n) { return n >= m - 1e-9 && n <= upper + 1e-9; };
    t.pass = inside(ns) && inside(nt);
    t.metric = std::max(0.0, m - std::min(ns, nt)) / m;
    t.flags = ns <= upper + 1e-9 && nt <= upper + 1e-9;
    t.detail = {{"m", m}, {"upper", upper}, {"norm_S", ns}, {"norm_Sigma", nt}, {"N", kNormN}};
    return t;
}

TrialOutcome check_zero(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Op s0 = paired(0.0, 0.0), t0 = transposed(0.0, 0.0);
    for (int k = -8; k <= 8; ++k)
        if (!apply_exact(s0, Rational::z(k)).is_zero() || !apply_exact(t0, Rational::z(k)).is_zero()) t.pass = false;
    const int mode = pick(rng, 0, 2);
    const Rational a = mode == 0 ? Rational{} : draw(rng);
    const Rational b = mode == 1 ? Rational{} : draw(rng);
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}};
    bool s_seen = false, t_seen = false;
    for (int k = -8; k <= 8; ++k) {
        s_seen = s_seen || probe_max(apply_exact(paired(a, b), Rational::z(k))) > 1e-12;
        t_seen = t_seen || probe_max(apply_exact(transposed(a, b), Rational::z(k))) > 1e-12;
    }
    t.pass = t.pass && s_seen && t_seen;
    t.detail = {{"nonzero_S", s_seen}, {"nonzero_Sigma", t_seen}};
    return t;
}

TrialOutcome check_prod(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const auto probes = probe_functions(rng);
    const Rational a = draw(rng), b = draw(rng);
    const Rational at = draw(rng, ClassConstraint::Hinf), bt = draw(rng, ClassConstraint::HinfBar);
    const double pos_s = operator_identity({compose(paired(a, b), paired(at, bt))}, {paired(a * at, b * bt)}, probes, size(a, b) * size(at, bt));

    const Rational a2 = draw(rng, ClassConstraint::HinfBar), b2 = draw(rng, ClassConstraint::Hinf);
    const Rational at2 = draw(rng), bt2 = draw(rng);
    const double pos_t =
        operator_identity({compose(transposed(a2, b2), transposed(at2, bt2))}, {transposed(a2 * at2, b2 * bt2)}, probes, size(a2, b2) * size(at2, bt2));

    Rational at3 = draw(rng);
    while (membership(at3, SpaceTag::Hinf)) at3 = at3.shifted(-1);
    const Rational bt3 = draw(rng);
    const double neg_s = operator_identity({compose(paired(a, b), paired(at3, bt3))}, {paired(a * at3, b * bt3)}, probes, size(a, b) * size(at3, bt3));
    Rational a3 = draw(rng);
    while (membership(a3, SpaceTag::HinfBar)) a3 = a3.shifted(1);
    const double neg_t =
        operator_identity({compose(transposed(a3, b2), transposed(at2, bt2))}, {transposed(a3 * at2, b2 * bt2)}, probes, size(a3, b2) * size(at2, bt2));

    t.inputs = {{"a", sym(a)}, {"b", sym(b)}, {"a_tilde", sym(at)}, {"b_tilde", sym(bt)}, {"a_tilde_violating", sym(at3)}};
    t.metric = std::max(pos_s, pos_t);
    t.pass = pos_s <= kIdentityTol && pos_t <= kIdentityTol && neg_s >= kWitnessTol && neg_t >= kWitnessTol;
    t.detail = {{"residual_S", pos_s}, {"residual_Sigma", pos_t}, {"violating_S", neg_s}, {"violating_Sigma", neg_t}};
    return t;
}

// (a - b)(P+ b̃ P- - P- ã P+)
Op paired_product_defect(const Rational& a, const Rational& b, const Rational& at, const Rational& bt) {
    return compose(mult(a - b), difference(sandwich(proj_plus(), bt, proj_minus()), sandwich(proj_minus(), at, proj_plus())));
}

// (P- b P+ - P+ a P-)(ã - b̃)
Op transposed_product_defect(const Rational& a, const Rational& b, const Rational& at, const Rational& bt) {
    return compose(difference(sandwich(proj_minus(), b, proj_plus()), sandwich(proj_plus(), a, proj_minus())), mult(at - bt));
}

TrialOutcome check_prodres(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational a = draw(rng), b = draw(rng), at = draw(rng), bt = draw(rng);
    const auto probes = probe_functions(rng);
    const double rs = operator_identity({compose(paired(a, b), paired(at, bt))},
                                        {paired(a * at, b * bt), paired_product_defect(a, b, at, bt)}, probes, size(a, b) * size(at, bt));
    const double rt = operator_identity({compose(transposed(a, b), transposed(at, bt))},
                                        {transposed(a * at, b * bt), transposed_product_defect(a, b, at, bt)}, probes, size(a, b) * size(at, bt));
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}, {"a_tilde", sym(at)}, {"b_tilde", sym(bt)}};
    t.metric = std::max(rs, rt);
    t.pass = t.metric <= kIdentityTol;
    t.detail = {{"residual_S", rs}, {"residual_Sigma", rt}};
    return t;
}

TrialOutcome check_commexp(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational a = draw(rng), b = draw(rng), at = draw(rng), bt = draw(rng);
    const auto probes = probe_functions(rng);
    const Op s = paired(a, b), st = paired(at, bt);
    const double rs = operator_identity(
        {compose(s, st)},
        {compose(st, s), paired_product_defect(a, b, at, bt), scale(-1.0, paired_product_defect(at, bt, a, b))}, probes, size(a, b) * size(at, bt));
    // (P+ ã P- - P- b̃ P+)(a - b) - (P+ a P- - P- b P+)(ã - b̃)
    const Op x = transposed(a, b), xt = transposed(at, bt);
    const Op r1 = compose(difference(sandwich(proj_plus(), at, proj_minus()), sandwich(proj_minus(), bt, proj_plus())), mult(a - b));
    const Op r2 = compose(difference(sandwich(proj_plus(), a, proj_minus()), sandwich(proj_minus(), b, proj_plus())), mult(at - bt));
    const double rt = operator_identity({compose(x, xt)}, {compose(xt, x), r1, scale(-1.0, r2)}, probes, size(a, b) * size(at, bt));
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}, {"a_tilde", sym(at)}, {"b_tilde", sym(bt)}};
    t.metric = std::max(rs, rt);
    t.pass = t.metric <= kIdentityTol;
    t.detail = {{"residual_S", rs}, {"residual_Sigma", rt}};
    return t;
}

TrialOutcome check_finrank(Rng& rng, const RunConfig& cfg) {
    TrialOutcome t;
    const Rational a = draw(rng, ClassConstraint::None, 1), b = draw(rng, ClassConstraint::None, 1);
    const Rational at = draw(rng, ClassConstraint::None, 1), bt = draw(rng, ClassConstraint::None, 1);
    const Rational eta = draw(rng, ClassConstraint::None, 1);
    const Op s = paired(a, b), st = paired(at, bt), x = transposed(a, b), xt = transposed(at, bt);
    const std::vector<std::tuple<const char*, Op, int>> cases = {
        {"product_S", difference(compose(s, st), paired(a * at, b * bt)), plus_rank(bt) + minus_rank(at)},
        {"commutator_S", commutator(s, st), plus_rank(bt) + minus_rank(at) + plus_rank(b) + minus_rank(a)},
        {"eta_S", commutator(s, mult(eta)), plus_rank(eta) + minus_rank(eta)},
        {"product_Sigma", difference(compose(x, xt), transposed(a * at, b * bt)), minus_rank(b) + plus_rank(a)},
        {"commutator_Sigma", commutator(x, xt), plus_rank(at) + minus_rank(bt) + plus_rank(a) + minus_rank(b)},
        {"eta_Sigma", commutator(x, mult(eta)), plus_rank(eta) + minus_rank(eta)},
    };
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}, {"a_tilde", sym(at)}, {"b_tilde", sym(bt)}, {"eta", sym(eta)}};
    for (const auto& [name, op, bound] : cases) {
        const int n1 = std::max(cfg.oracle_N / 2, bandwidth(op));
        const RankResult r1 = numerical_rank(truncate(op, n1), tolerances().rank_tol);
        const RankResult r2 = numerical_rank(truncate(op, 2 * n1), tolerances().rank_tol);
        const bool ok = r1.determinate && r2.determinate && r1.rank == r2.rank && r2.rank <= bound;
        t.pass = t.pass && ok;
        t.metric = std::max(t.metric, static_cast<double>(r2.rank));
        t.detail[name] = {{"rank_N", r1.rank}, {"rank_2N", r2.rank}, {"bound", bound}, {"gap", r2.gap}, {"N", n1}};
    }
    return t;
}

TrialOutcome check_commutant(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const auto probes = probe_functions(rng);
    const int kind = pick(rng, 0, 2);
    Rational a, b, at, bt;     // commuting S pair
    Rational sa, sb, sat, sbt; // commuting Σ pair
    if (kind == 0) {
        a = b = sa = sb = draw(rng);
        at = bt = sat = sbt = draw(rng);
    } else if (kind == 1) {
        a = draw(rng, ClassConstraint::Hinf), at = draw(rng, ClassConstraint::Hinf);
        b = draw(rng, ClassConstraint::HinfBar), bt = draw(rng, ClassConstraint::HinfBar);
        sa = b, sat = bt, sb = a, sbt = at;
    } else {
        at = sat = draw(rng), bt = sbt = draw(rng);
        const cplx lambda = draw_constant(rng), mu = draw_constant(rng);
        a = sa = lambda * at + mu;
        b = sb = lambda * bt + mu;
    }
    const double pos_s = operator_identity({compose(paired(a, b), paired(at, bt))}, {compose(paired(at, bt), paired(a, b))}, probes, size(a, b) * size(at, bt));
    const double pos_t = operator_identity({compose(transposed(sa, sb), transposed(sat, sbt))},
                                           {compose(transposed(sat, sbt), transposed(sa, sb))}, probes, size(sa, sb) * size(sat, sbt));
    // Violating instances: none of the commuting configurations for S or for Σ.
    Rational na, nb, nat, nbt;
    auto in = [](const Rational& f, SpaceTag t) { return membership(f, t); };
    do {
        na = draw(rng), nb = draw(rng), nat = draw(rng), nbt = draw(rng);
    } while ((in(na, SpaceTag::Hinf) && in(nat, SpaceTag::Hinf) && in(nb, SpaceTag::HinfBar) && in(nbt, SpaceTag::HinfBar)) ||
             (in(na, SpaceTag::HinfBar) && in(nat, SpaceTag::HinfBar) && in(nb, SpaceTag::Hinf) && in(nbt, SpaceTag::Hinf)));
    const double neg_s =
        operator_identity({compose(paired(na, nb), paired(nat, nbt))}, {compose(paired(nat, nbt), paired(na, nb))}, probes, size(na, nb) * size(nat, nbt));
    const double neg_t = operator_identity({compose(transposed(na, nb), transposed(nat, nbt))},
                                           {compose(transposed(nat, nbt), transposed(na, nb))}, probes, size(na, nb) * size(nat, nbt));
    t.inputs = {{"condition", kind}, {"a", sym(a)}, {"b", sym(b)}, {"a_tilde", sym(at)}, {"b_tilde", sym(bt)},
                {"violating", {sym(na), sym(nb), sym(nat), sym(nbt)}}};
    t.metric = std::max(pos_s, pos_t);
    t.pass = pos_s <= kIdentityTol && pos_t <= kIdentityTol && neg_s >= kWitnessTol && neg_t >= kWitnessTol;
    t.detail = {{"residual_S", pos_s}, {"residual_Sigma", pos_t}, {"violating_S", neg_s}, {"violating_Sigma", neg_t}};
    return t;
}

TrialOutcome check_constcomm(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const auto probes = probe_functions(rng);
    const Rational a = draw(rng), b = draw(rng);
    const Rational c = draw_constant(rng);
    const Rational eta = nonconstant(draw(rng));
    auto residual = [&](const Op& x, const Rational& e) {
        return operator_identity({compose(x, mult(e))}, {compose(mult(e), x)}, probes, size(a, b) * size(e, e));
    };
    const double pos = std::max(residual(paired(a, b), c), residual(transposed(a, b), c));
    const double neg = std::min(residual(paired(a, b), eta), residual(transposed(a, b), eta));
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}, {"constant", sym(c)}, {"eta", sym(eta)}};
    t.metric = pos;
    t.pass = pos <= kIdentityTol && neg >= kWitnessTol;
    t.detail = {{"constant_residual", pos}, {"nonconstant_residual", neg}};
    return t;
}

/// f = f+ + f- with η f+ ∈ H2plus and η f- ∈ H2minus.
Rational commuting_function(const Rational& eta, Rng& rng) {
    const Zpk z = eta.zpk();
    Zpk plus{1.0, std::max(0, -z.zpow), {}, {}};
    Zpk minus{1.0, 0, {}, {}};
    int deg = z.zpow, outside = 0;
    for (const auto& p : z.poles) {
        deg -= p.multiplicity;
        if (p.loc == Location::Inside) plus.zeros.push_back(p);
        if (p.loc == Location::Outside) {
            minus.zeros.push_back(p);
            outside += p.multiplicity;
        }
    }
    for (const auto& q : z.zeros) deg += q.multiplicity;
    minus.zpow = -(outside + std::max(0, deg));
    return Rational::from_zpk(plus) * draw(rng, ClassConstraint::Hinf, 1) +
           Rational::from_zpk(minus) * draw(rng, ClassConstraint::HinfBar, 1).shifted(-1);
}

struct KerComm {
    bool spaces, plus_eq, minus_eq;
    json to_json() const { return {{"spaces", spaces}, {"plus", plus_eq}, {"minus", minus_eq}}; }
    bool all() const { return spaces && plus_eq && minus_eq; }
    bool none() const { return !spaces && !plus_eq && !minus_eq; }
};

KerComm kercomm_conditions(const Rational& eta, const Rational& f) {
    const Rational fp = riesz_project(f, Side::Plus), fm = riesz_project(f, Side::Minus);
    const Rational ef = eta * f;
    const Rational ep = eta * fp, em = eta * fm;
    return {identity_residual({riesz_project(ep, Side::Minus)}, {}, probe_max(ep, 64)) <= kIdentityTol &&
                identity_residual({riesz_project(em, Side::Plus)}, {}, probe_max(em, 64)) <= kIdentityTol,
            identity_residual({eta * fp}, {riesz_project(ef, Side::Plus)}) <= kIdentityTol,
            identity_residual({eta * fm}, {riesz_project(ef, Side::Minus)}) <= kIdentityTol};
}

double commute_residual(const Op& x, double scale, const Rational& eta, const Rational& f) {
    return identity_residual({eta * apply_exact(x, f)}, {apply_exact(x, eta * f)}, scale * probe_max(eta, 256) * probe_max(f, 256));
}

TrialOutcome check_kercomm_s(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational a = draw(rng), b = draw(rng);
    const Rational eta = nonconstant(draw(rng));
    const Rational good = commuting_function(eta, rng), bad = draw(rng);
    const Op s = paired(a, b);
    const KerComm cg = kercomm_conditions(eta, good), cb = kercomm_conditions(eta, bad);
    const double rg = commute_residual(s, size(a, b), eta, good), rb = commute_residual(s, size(a, b), eta, bad);
    const bool bad_commutes = rb <= kIdentityTol;
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}, {"eta", sym(eta)}, {"f_constructed", sym(good)}, {"f_random", sym(bad)}};
    t.metric = rg;
    t.pass = rg <= kIdentityTol && cg.all() && (bad_commutes ? cb.all() : cb.none());
    t.detail = {{"constructed", cg.to_json()}, {"random", cb.to_json()}, {"commute_residual", rg}, {"random_commutes", bad_commutes}};
    return t;
}

TrialOutcome check_kercomm_sig(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational a = draw(rng), b = draw(rng);
    const Rational eta = nonconstant(draw(rng));
    const Rational g = commuting_function(eta, rng);
    const Rational good = g / (a - b), bad = draw(rng);
    const Op x = transposed(a, b);
    const KerComm cg = kercomm_conditions(eta, (a - b) * good), cb = kercomm_conditions(eta, (a - b) * bad);
    const double rg = commute_residual(x, size(a, b), eta, good), rb = commute_residual(x, size(a, b), eta, bad);
    const bool bad_commutes = rb <= kIdentityTol;
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}, {"eta", sym(eta)}, {"f_constructed", sym(good)}, {"f_random", sym(bad)}};
    t.metric = rg;
    t.pass = rg <= kIdentityTol && cg.all() && (bad_commutes ? cb.all() : cb.none());
    t.detail = {{"constructed", cg.to_json()}, {"random", cb.to_json()}, {"commute_residual", rg}, {"random_commutes", bad_commutes}};
    return t;
}

TrialOutcome check_adj(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const auto probes = monomial_probes(4);
    const Rational a = draw(rng);
    const Rational b = a - Rational(draw_constant(rng));
    const double pos = std::max(adjoint_residual(paired(a, b), paired(a.circle_conjugate(), b.circle_conjugate()), probes),
                                adjoint_residual(transposed(a, b), transposed(a.circle_conjugate(), b.circle_conjugate()), probes));

    // a - b nonconstant: S* = Σ_{ā,b̄} would have to equal S_{c,d} with c = S*1 and d = z S* z̄.
    const Rational na = draw(rng);
    Rational nb = draw(rng);
    if ((na - nb).is_constant()) nb = nb + Rational::z();
    const Op adj = adjoint(paired(na, nb));
    const Rational c = apply_exact(adj, 1.0), d = apply_exact(adj, Rational::z(-1)).shifted(1);
    const Op forced = paired(c, d);
    double neg = 0.0;
    for (int k = -4; k <= 4; ++k) {
        const Rational f = Rational::z(k);
        const Rational diff = apply_exact(adj, f) - apply_exact(forced, f);
        neg = std::max(neg, probe_max(diff, std::max(32, probe_count(diff))));
    }
    const double natural = adjoint_residual(paired(na, nb), paired(na.circle_conjugate(), nb.circle_conjugate()), probes);
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}, {"a_violating", sym(na)}, {"b_violating", sym(nb)}};
    t.metric = pos;
    t.pass = pos <= kAdjointTol && neg >= kAdjointWitness && natural >= kAdjointWitness;
    t.detail = {{"positive_residual", pos}, {"negative_forced_residual", neg}, {"negative_natural_residual", natural}};
    return t;
}

TrialOutcome check_jmap(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const SymbolPair p = forced_pair(rng, pick(rng, 1, 3));
    const KernelBasis k = transposed_kernel(p);
    t.inputs = pair_json(p);
    std::vector<Rational> images;
    double worst = 0.0;
    for (const Rational& psi : k.elements) {
        const Rational phi = j_map(psi, p, false);
        images.push_back(phi);
        worst = std::max(worst, residual_S(phi, p));
        const Rational back = j_map(phi, p, true);
        worst = std::max(worst, identity_residual({back}, {psi}));
    }
    const int rank = images.empty() ? 0 : numerical_rank([&] {
        Eigen::MatrixXcd m(129, static_cast<Eigen::Index>(images.size()));
        for (std::size_t j = 0; j < images.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = coefficient_vector(images[j], -64, 64);
        return m;
    }(), 1e-9).rank;
    // 1/(z - q) with q outside and a(q) != 0 puts an outside pole into aψ.
    std::uniform_real_distribution<double> radius(1.6, 5.0);
    cplx q;
    do {
        q = std::polar(radius(rng), 2.0 * std::numbers::pi * unit(rng));
    } while (std::abs(p.a(q)) < 1e-8 * probe_max(p.a));
    bool rejects = false;
    try {
        j_map(Rational::from_zpk({1.0, 0, {}, {{q, 1, Location::Outside}}}), p, false);
    } catch (const Error& e) {
        rejects = e.code() == ErrorCode::NotInKernel;
        t.detail["rejection"] = to_string(e.code());
    }
    t.metric = worst;
    t.pass = k.dimension() > 0 && worst <= kIdentityTol && rank == k.dimension() && rejects;
    t.detail.update({{"dimension", k.dimension()}, {"image_rank", rank}, {"residual", worst}, {"rejects_non_member", rejects}});
    return t;
}

TrialOutcome check_rank1(Rng& rng, const RunConfig& cfg) {
    TrialOutcome t;
    const Rational a = draw(rng);
    const bool degenerate = unit(rng) < 0.25;
    const Rational b = degenerate ? a : draw(rng);
    const int expected = degenerate ? 0 : 1;
    const RankResult rs = rank_escalating(commutator(paired(a, b), mult(Rational::z())), cfg.oracle_N);
    const RankResult rt = rank_escalating(commutator(transposed(a, b), mult(Rational::z())), cfg.oracle_N);

    const Rational d = a - b, zbar = Rational::z(-1);
    double formula = 0.0;
    for (const Rational& f : probe_functions(rng)) {
        const cplx fm1 = fourier_coefficient(f, -1), f0 = fourier_coefficient(f, 0);
        const cplx dm1 = fourier_coefficient(d * f, -1), d0 = fourier_coefficient(d * f, 0);
        const double floor = probe_max(d, 64) * probe_max(f, 64);
        formula = std::max({formula,
                            identity_residual({apply_exact(commutator(paired(a, b), mult(Rational::z())), f)}, {fm1 * d}, floor),
                            identity_residual({apply_exact(commutator(transposed(a, b), mult(Rational::z())), f)}, {Rational(dm1)}, floor),
                            identity_residual({apply_exact(commutator(paired(a, b), mult(zbar)), f)}, {-f0 * d * zbar}, floor),
                            identity_residual({apply_exact(commutator(transposed(a, b), mult(zbar)), f)}, {-d0 * zbar}, floor)});
    }
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}};
    t.metric = formula;
    t.pass = rs.rank == expected && rt.rank == expected && rs.determinate && rt.determinate && formula <= kIdentityTol;
    t.detail = {{"rank_S", rs.rank}, {"rank_Sigma", rt.rank}, {"gap_S", rs.gap}, {"gap_Sigma", rt.gap},
                {"expected", expected}, {"formula_residual", formula}};
    return t;
}

TrialOutcome check_equiv(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational a = draw(rng), b = draw(rng);
    const auto probes = probe_functions(rng);
    const Rational ab = a / b;
    const Op left = sum(identity_op(), sandwich(proj_plus(), ab, proj_minus()));    // I + P A B⁻¹ Q
    const Op right = compose(difference(identity_op(), sandwich(proj_minus(), ab, proj_plus())), mult(b));  // (I - Q A B⁻¹ P) B
    const Op middle = sum(compose(mult(b.reciprocal()), proj_plus()), compose(mult(a.reciprocal()), proj_minus()));
    const double r8 = operator_identity({transposed(a, b)}, {compose(compose(left, mult(a)), compose(middle, right))}, probes, size(a, b));
    const double r9 =
        operator_identity({transposed(a, b)}, {compose(compose(left, mult(b.reciprocal())), compose(paired(a, b), right))}, probes, size(a, b));
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}};
    t.metric = std::max(r8, r9);
    t.pass = t.metric <= kIdentityTol;
    t.detail = {{"residual_general", r8}, {"residual_commuting", r9}};
    return t;
}

TrialOutcome check_rh(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const SymbolPair p = forced_pair(rng, pick(rng, 1, 3));
    const KernelBasis k = paired_kernel(p);
    const SymbolPair toeplitz_pair = make_pair(p.a / p.b, 1.0);
    double worst = 0.0;
    for (const auto& [plus, minus] : k.pairs) {
        worst = std::max({worst, identity_residual({p.a * plus, p.b * minus}, {}) == 0.0 ? 0.0 : residual_S(plus + minus, p),
                          residual_Sigma(plus, toeplitz_pair)});
        const double rh = probe_max(p.a * plus + p.b * minus, 64) / std::max(probe_max(p.a * plus, 64), 1e-300);
        worst = std::max(worst, rh);
    }
    const double outsider = residual_S(draw(rng), p);
    t.inputs = pair_json(p);
    t.metric = worst;
    t.pass = k.dimension() > 0 && worst <= kIdentityTol && outsider >= kWitnessTol;
    t.detail = {{"dimension", k.dimension()}, {"residual", worst}, {"non_member_residual", outsider}};
    return t;
}

TrialOutcome check_scale(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const SymbolPair p = forced_pair(rng, pick(rng, 1, 3));
    const Rational eta = draw(rng);
    const SymbolPair q = make_pair(p.a * eta, p.b * eta);
    const KernelBasis kp = paired_kernel(p), kq = paired_kernel(q);
    t.inputs = {{"a", sym(p.a)}, {"b", sym(p.b)}, {"eta", sym(eta)}};
    t.pass = same_span_S(kp, p, kq, q);
    t.detail = {{"dim", kp.dimension()}, {"dim_scaled", kq.dimension()}};
    return t;
}

TrialOutcome check_kereq(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const SymbolPair p = forced_pair(rng, pick(rng, 1, 2));
    const Rational eta = draw(rng);
    const SymbolPair same = make_pair(p.a * eta, p.b * eta);
    const SymbolPair other = forced_pair(rng, pick(rng, 1, 2));
    const KernelBasis kp = paired_kernel(p);
    const bool eq_pos = kernels_equal_S(p, same), actual_pos = same_span_S(kp, p, paired_kernel(same), same);
    const bool eq_neg = kernels_equal_S(p, other), actual_neg = same_span_S(kp, p, paired_kernel(other), other);
    t.inputs = {{"p", pair_json(p)}, {"eta", sym(eta)}, {"q", pair_json(other)}};
    t.pass = eq_pos && actual_pos && eq_neg == actual_neg && !eq_neg;
    t.detail = {{"scaled_criterion", eq_pos}, {"scaled_actual", actual_pos}, {"other_criterion", eq_neg}, {"other_actual", actual_neg}};
    return t;
}

TrialOutcome check_unique(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational plus = draw(rng, ClassConstraint::Hinf, 2);
    const Rational minus = draw(rng, ClassConstraint::HinfBar, 2).shifted(-1);
    const Rational phi = plus + minus;
    t.inputs = {{"phi_plus", sym(plus)}, {"phi_minus", sym(minus)}};
    const SymbolPair p = symbols_from_function(plus, minus);
    const Rational eta = draw(rng);
    const SymbolPair q = make_pair(p.a * eta, p.b * eta);
    const double r = residual_S(phi, p);
    const bool equal = kernels_equal_S(p, q);
    // Any pair annihilating φ has the quotient -φ-/φ+.
    const bool quotient = approx_equal(p.a * plus, -(p.b * minus), tolerances().eps_eq);
    t.metric = r;
    t.pass = r <= tolerances().eps_eq && equal && member_S(phi, q) && quotient;
    t.detail = {{"a", sym(p.a)}, {"b", sym(p.b)}, {"residual", r}, {"kernels_equal_scaled", equal}, {"quotient", quotient}};
    return t;
}

TrialOutcome check_nontriv_s(Rng& rng, const RunConfig& cfg) {
    TrialOutcome t;
    const SymbolPair p = make_pair(draw(rng), draw(rng));
    const Nontriviality nt = nontrivial_S(p);
    const KernelBasis tk = toeplitz_kernel(p.a / p.b);
    t.inputs = pair_json(p);
    bool ok = (nt.value == Tri::True) == (tk.dimension() > 0) && nt.value != Tri::NeedsOracle;
    if (nt.value == Tri::True) {
        const Rational& w = *nt.witness;
        const Rational wp = riesz_project(w, Side::Plus), wm = riesz_project(w, Side::Minus);
        t.metric = residual_S(w, p);
        ok = ok && t.metric <= tolerances().eps_eq && membership(wp, SpaceTag::OuterPlus) &&
             approx_equal(p.a * wp, -(p.b * wm), tolerances().eps_eq);
        t.flags = 1;
    }
    const Op s = paired(p.a, p.b);
    int oracle_dim = -1;
    if (2 * bandwidth(s) <= cfg.oracle_N) {
        oracle_dim = oracle_escalating(s, cfg.oracle_N).dim_estimate;
        ok = ok && oracle_dim == tk.dimension();
    }
    t.pass = ok;
    t.detail = {{"value", to_string(nt.value)}, {"dimension", tk.dimension()}, {"oracle_dimension", oracle_dim}};
    return t;
}

TrialOutcome check_coburn_s(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational a = draw(rng, ClassConstraint::None, 4, false), b = draw(rng, ClassConstraint::None, 4, false);
    const Tri x = nontrivial_S(make_pair(a, b)).value, y = nontrivial_S(make_pair(b, a)).value;
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}};
    t.pass = !(x == Tri::True && y == Tri::True) && x != Tri::NeedsOracle && y != Tri::NeedsOracle;
    t.flags = x == Tri::True || y == Tri::True;
    t.detail = {{"ab", to_string(x)}, {"ba", to_string(y)}};
    return t;
}

bool zero_free_in_disc(const Rational& b) {
    const Zpk z = b.zpk();
    if (z.zpow > 0) return false;
    return std::none_of(z.zeros.begin(), z.zeros.end(), [](const Root& r) { return r.loc == Location::Inside; });
}

TrialOutcome check_sigma_struct(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const bool outer_b = unit(rng) < 0.5;
    const SymbolPair p = outer_b ? forced_pair(rng, pick(rng, 1, 2), 2, draw(rng, ClassConstraint::Outer))
                                 : forced_pair(rng, pick(rng, 1, 2));
    const KernelBasis k = transposed_kernel(p);
    bool ok = k.dimension() > 0;
    const SymbolPair toeplitz_pair = make_pair(p.a / p.b, 1.0);
    const bool b_disc_free = zero_free_in_disc(p.b);
    for (const Rational& psi : k.elements) {
        ok = ok && membership(psi, SpaceTag::L2) && membership(p.a * psi, SpaceTag::H2minus) &&
             membership(p.b * psi, SpaceTag::H2plus);
        t.metric = std::max({t.metric, residual_Sigma(psi, p), residual_Sigma(p.b * psi, toeplitz_pair)});
        if (b_disc_free) ok = ok && membership(psi, SpaceTag::H2plus);
    }
    ok = ok && t.metric <= kIdentityTol;

    // ker Σ_{h̄+, θ} = z̄ conj(K_θ) for outer h+ and inner θ.
    const Rational h = draw(rng, ClassConstraint::Outer), theta = draw(rng, ClassConstraint::Inner, 2);
    const SymbolPair q = make_pair(h.circle_conjugate(), theta);
    const KernelBasis kq = transposed_kernel(q), model = model_space_basis(theta);
    bool reflected = kq.dimension() == model.dimension();
    for (const Rational& e : kq.elements) reflected = reflected && membership(e, SpaceTag::H2minus);
    for (const Rational& e : model.elements) reflected = reflected && member_Sigma(e.circle_conjugate().shifted(-1), q);

    t.inputs = {{"p", pair_json(p)}, {"h_plus", sym(h)}, {"theta", sym(theta)}};
    t.pass = ok && reflected;
    t.flags = b_disc_free;
    t.detail = {{"dimension", k.dimension()}, {"b_zero_free_in_disc", b_disc_free}, {"residual", t.metric},
                {"model_dimension", model.dimension()}, {"reflected_dimension", kq.dimension()}, {"reflected_ok", reflected}};
    return t;
}

TrialOutcome check_nontriv_sig(Rng& rng, const RunConfig& cfg) {
    TrialOutcome t;
    Rational a0 = draw(rng), b0 = draw(rng);
    const int n = pick(rng, 0, 3);
    a0 = a0.shifted(-(winding_index(a0 / b0) + n));
    const int m = unit(rng) < 0.5 ? 0 : pick(rng, 1, 2);
    Rational c(1.0);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    for (int j = 0; j < m; ++j) {
        const cplx tj = std::polar(1.0, phase + std::numbers::pi * j);
        c = c * Rational::from_zpk({1.0, 0, {{tj, 1, Location::On}}, {}});
    }
    const SymbolPair p = make_pair(a0 * c, b0 * c);
    const Nontriviality nt = nontrivial_Sigma(p);
    t.inputs = {{"a", sym(p.a)}, {"b", sym(p.b)}, {"index_target", -n}, {"circle_zeros", m}};
    bool ok = nt.value != Tri::NeedsOracle && (nt.value == Tri::True) == (n > m);
    if (nt.value == Tri::True) {
        const Rational& w = *nt.witness;
        t.metric = residual_Sigma(w, p);
        ok = ok && t.metric <= kIdentityTol && membership(w, SpaceTag::L2) && membership(p.b * w, SpaceTag::OuterPlus) &&
             nontrivial_S(p).value == Tri::True;
        t.flags = 1;
    }
    int oracle_dim = -1;
    const Op x = transposed(p.a, p.b);
    if (m == 0 && 2 * bandwidth(x) <= cfg.oracle_N) {
        oracle_dim = oracle_escalating(x, cfg.oracle_N).dim_estimate;
        ok = ok && (oracle_dim > 0) == (nt.value == Tri::True) && oracle_dim == std::max(0, n);
    } else if (m > 0) {
        // The Toeplitz-kernel lifts φ+/b pick up the circle zeros of b as poles.
        for (const Rational& f : toeplitz_kernel(p.a / p.b).elements)
            ok = ok && (n > m || !membership(f / p.b, SpaceTag::L2));
    }
    t.pass = ok;
    t.detail = {{"value", to_string(nt.value)}, {"oracle_dimension", oracle_dim}, {"certificate", nt.certificate}};
    return t;
}

bool has_inner_factor(const Rational& h) {
    const Zpk z = h.zpk();
    if (z.zpow > 0) return true;
    return std::any_of(z.zeros.begin(), z.zeros.end(), [](const Root& r) { return r.loc == Location::Inside; });
}

TrialOutcome check_sigma_incl(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const SymbolPair p = forced_pair(rng, pick(rng, 1, 2));
    const Rational hm = draw(rng, ClassConstraint::HinfBar, 1), hp = draw(rng, ClassConstraint::Hinf, 1);
    const SymbolPair q = make_pair(p.a * hm, p.b * hp);
    const bool strict = has_inner_factor(hp) || has_inner_factor(hm.circle_conjugate());
    const Inclusion forward = sigma_inclusion(p, q), ratios = sigma_inclusion_by_ratios(p, q);
    const Inclusion backward = sigma_inclusion(q, p);
    const Inclusion expected = strict ? Inclusion::Subset : Inclusion::Equal;
    t.inputs = {{"p", pair_json(p)}, {"h_minus", sym(hm)}, {"h_plus", sym(hp)}};
    t.pass = forward == expected && ratios == expected && backward == (strict ? Inclusion::NoSubset : Inclusion::Equal);
    t.flags = strict;
    t.detail = {{"forward", to_string(forward)}, {"ratios", to_string(ratios)}, {"backward", to_string(backward)}, {"strict_expected", strict}};
    return t;
}

TrialOutcome check_coburn_sig(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational a = draw(rng, ClassConstraint::None, 4, false), b = draw(rng, ClassConstraint::None, 4, false);
    const SymbolPair ab = make_pair(a, b), ba = make_pair(b, a);
    const Tri x = nontrivial_Sigma(ab).value, y = nontrivial_Sigma(ba).value;
    const bool implication = (x != Tri::True || nontrivial_S(ab).value == Tri::True) &&
                             (y != Tri::True || nontrivial_S(ba).value == Tri::True);
    t.inputs = {{"a", sym(a)}, {"b", sym(b)}};
    t.pass = !(x == Tri::True && y == Tri::True) && x != Tri::NeedsOracle && y != Tri::NeedsOracle && implication;
    t.flags = x == Tri::True || y == Tri::True;
    t.detail = {{"ab", to_string(x)}, {"ba", to_string(y)}, {"implies_S", implication}};
    return t;
}

TrialOutcome check_inv(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const SymbolPair p = make_pair(draw(rng, ClassConstraint::HinfBar), draw(rng, ClassConstraint::Hinf));
    const Rational at = draw(rng, ClassConstraint::HinfBar), bt = draw(rng, ClassConstraint::Hinf);
    const KernelBasis k = transposed_kernel(p);
    bool ok = true;
    for (const Rational& psi : k.elements) {
        const double r = residual_Sigma(apply_exact(transposed(at, bt), psi), p);
        t.metric = std::max(t.metric, r);
        ok = ok && r <= tolerances().eps_eq;
    }
    // Paired half: a ∈ H∞ and b ∈ conj(H∞) force a φ+ = -b φ- ∈ H2plus ∩ H2minus = {0}.
    const SymbolPair ps = make_pair(draw(rng, ClassConstraint::Hinf), draw(rng, ClassConstraint::HinfBar));
    const Rational ast = draw(rng, ClassConstraint::Hinf), bst = draw(rng, ClassConstraint::HinfBar);
    const KernelBasis ks = paired_kernel(ps);
    for (const Rational& phi : ks.elements) ok = ok && member_S(apply_exact(paired(ast, bst), phi), ps);
    t.inputs = {{"sigma_pair", pair_json(p)}, {"a_tilde", sym(at)}, {"b_tilde", sym(bt)}, {"paired_pair", pair_json(ps)}};
    t.pass = ok && ks.status == KernelStatus::Empty;
    t.flags = k.dimension() > 0;
    t.detail = {{"sigma_dimension", k.dimension()}, {"paired_dimension", ks.dimension()}, {"residual", t.metric}};
    return t;
}

TrialOutcome check_modelinv(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const Rational theta = draw(rng, ClassConstraint::Inner, 3);
    const Rational at = draw(rng, ClassConstraint::HinfBar), bt = draw(rng, ClassConstraint::Hinf);
    const KernelBasis k = model_space_basis(theta);
    const SymbolPair p = make_pair(theta.circle_conjugate(), 1.0);
    for (const Rational& e : k.elements) t.metric = std::max(t.metric, residual_Sigma(apply_exact(transposed(at, bt), e), p));
    t.inputs = {{"theta", sym(theta)}, {"a_tilde", sym(at)}, {"b_tilde", sym(bt)}};
    t.pass = k.dimension() > 0 && t.metric <= tolerances().eps_eq;
    t.detail = {{"dimension", k.dimension()}, {"residual", t.metric}};
    return t;
}

TrialOutcome check_almost(Rng& rng, const RunConfig& cfg) {
    TrialOutcome t;
    const SymbolPair p = forced_pair(rng, pick(rng, 1, 2), 1);
    const Rational at = draw(rng, ClassConstraint::None, 1), bt = draw(rng, ClassConstraint::None, 1);
    struct Case {
        const char* name;
        Op x, op;
        std::vector<Rational> kernel;
    };
    const std::vector<Case> cases = {{"paired", paired(at, bt), paired(p.a, p.b), paired_kernel(p).elements},
                                     {"transposed", transposed(at, bt), transposed(p.a, p.b), transposed_kernel(p).elements}};
    t.inputs = {{"p", pair_json(p)}, {"a_tilde", sym(at)}, {"b_tilde", sym(bt)}};
    for (const Case& c : cases) {
        const RankResult r = rank_escalating(commutator(c.x, c.op), cfg.oracle_N);
        std::vector<Rational> images;
        for (const Rational& f : c.kernel) images.push_back(apply_exact(c.x, f));
        const int m = defect(c.kernel, images);
        t.pass = t.pass && r.determinate && m <= r.rank && !c.kernel.empty();
        t.metric = std::max(t.metric, static_cast<double>(m));
        t.detail[c.name] = {{"defect", m}, {"commutator_rank", r.rank}, {"dimension", c.kernel.size()}};
    }
    return t;
}

TrialOutcome check_defect1(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const SymbolPair p = forced_pair(rng, pick(rng, 1, 3));
    t.inputs = pair_json(p);
    const std::vector<std::pair<const char*, std::vector<Rational>>> kernels = {{"paired", paired_kernel(p).elements},
                                                                               {"transposed", transposed_kernel(p).elements}};
    for (const auto& [name, k] : kernels) {
        int worst = 0;
        for (const int shift : {1, -1}) {
            std::vector<Rational> images;
            for (const Rational& f : k) images.push_back(f.shifted(shift));
            worst = std::max(worst, defect(k, images));
        }
        t.pass = t.pass && !k.empty() && worst <= 1;
        t.metric = std::max(t.metric, static_cast<double>(worst));
        t.detail[name] = {{"defect", worst}, {"dimension", k.size()}};
    }
    return t;
}

/// Coefficients c with Σ c_i g_i having vanishing modes at `modes`.
Eigen::VectorXcd null_combination(const std::vector<Rational>& g, const std::vector<int>& modes) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(modes.size()), static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = fourier_coefficient(g[j], modes[i]);
    return right_svd(m).v.col(static_cast<Eigen::Index>(g.size()) - 1);
}

Rational combine(const std::vector<Rational>& g, const Eigen::VectorXcd& c) {
    Rational f;
    for (std::size_t j = 0; j < g.size(); ++j) f = f + Rational(c(static_cast<Eigen::Index>(j))) * g[j];
    return f;
}

/// η f+ ∈ H2plus and η f- ∈ H2minus, checked through the projections.
double stability_hypothesis(const Rational& eta, const Rational& f) {
    const Rational ep = eta * riesz_project(f, Side::Plus), em = eta * riesz_project(f, Side::Minus);
    return std::max(identity_residual({riesz_project(ep, Side::Plus)}, {ep}), identity_residual({riesz_project(em, Side::Minus)}, {em}));
}

TrialOutcome check_stab(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const SymbolPair p = forced_pair(rng, pick(rng, 2, 3));
    const KernelBasis ks = paired_kernel(p), kx = transposed_kernel(p);
    const bool plus_side = unit(rng) < 0.5;
    const int d = pick(rng, 1, ks.dimension() - 1);
    std::vector<int> modes;
    Rational eta;
    for (int j = 0; j < d; ++j) modes.push_back(plus_side ? j : -1 - j);
    for (int j = 0; j <= d; ++j) eta = eta + Rational(draw_constant(rng)) * Rational::z(plus_side ? -j : j);

    const Rational f = combine(ks.elements, null_combination(ks.elements, modes));
    const double hyp_s = stability_hypothesis(eta, f);
    const double res_s = residual_S(eta * f, p);

    std::vector<Rational> lifted;
    for (const Rational& psi : kx.elements) lifted.push_back((p.a - p.b) * psi);
    const Eigen::VectorXcd c = null_combination(lifted, modes);
    const Rational g = combine(kx.elements, c);
    const double hyp_t = stability_hypothesis(eta, combine(lifted, c));
    const double res_t = residual_Sigma(eta * g, p);

    t.inputs = {{"p", pair_json(p)}, {"eta", sym(eta)}};
    t.metric = std::max(res_s, res_t);
    t.pass = hyp_s <= kIdentityTol && hyp_t <= kIdentityTol && res_s <= tolerances().eps_eq && res_t <= tolerances().eps_eq;
    t.detail = {{"side", plus_side ? "plus" : "minus"}, {"order", d}, {"hypothesis_S", hyp_s}, {"hypothesis_Sigma", hyp_t},
                {"residual_S", res_s}, {"residual_Sigma", res_t}};
    return t;
}

TrialOutcome check_fplus0(Rng& rng, const RunConfig&) {
    TrialOutcome t;
    const SymbolPair p = forced_pair(rng, pick(rng, 1, 3));
    const KernelBasis k = paired_kernel(p);
    double plus0 = 0.0, minus1 = 0.0;
    for (const Rational& f : k.elements) {
        const double n = l2_norm(f);
        plus0 = std::max(plus0, std::abs(fourier_coefficient(f, 0)) / n);
        minus1 = std::max(minus1, std::abs(fourier_coefficient(f, -1)) / n);
    }
    t.inputs = pair_json(p);
    t.pass = k.dimension() > 0 && plus0 > 1e-8 && minus1 > 1e-8;
    t.metric = std::min(plus0, minus1);
    t.detail = {{"dimension", k.dimension()}, {"max_f_plus_0", plus0}, {"max_f_minus_1", minus1}};
    return t;
}

// ---------------------------------------------------------------- registry

using Check = TrialOutcome (*)(Rng&, const RunConfig&);

struct Entry {
    std::string_view id;
    std::string_view anchor;
    std::string_view metric;
    std::string_view flag;
    Check check;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = {
        {"P_NORM", "m ≤ ‖S_{a,b}‖ = ‖Σ_{ā,b̄}‖ ≤ min(M, √2 m)", "max_relative_shortfall", "upper_bound_held", check_norm},
        {"P_ZERO", "S_{a,b} = 0 ⇔ Σ_{a,b} = 0 ⇔ a = b = 0", "unused", "unused", check_zero},
        {"P_PROD", "S_{a,b} S_{ã,b̃} = S_{aã,bb̃} ⇔ ã ∈ H∞, b̃ ∈ conj(H∞)", "max_residual", "unused", check_prod},
        {"P_PRODRES", "S_{a,b} S_{ã,b̃} - S_{aã,bb̃} = (a-b)(P⁺b̃P⁻ - P⁻ãP⁺)", "max_residual", "unused", check_prodres},
        {"P_COMMEXP", "[S_{a,b}, S_{ã,b̃}] = (a-b)(P⁺b̃P⁻ - P⁻ãP⁺) - (ã-b̃)(P⁺bP⁻ - P⁻aP⁺)", "max_residual", "unused", check_commexp},
        {"P_FINRANK", "rank [S_{a,b}, S_{ã,b̃}] < ∞ for rational symbols", "max_rank", "unused", check_finrank},
        {"P_COMMUTANT", "[S_{a,b}, S_{ã,b̃}] = 0 ⇔ a=b, ã=b̃ or a,ã ∈ H∞, b,b̃ ∈ conj(H∞) or (a,b) = λ(ã,b̃) + μ", "max_residual", "unused", check_commutant},
        {"P_CONSTCOMM", "[S_{a,b}, ηI] = 0 ⇔ η ∈ ℂ ⇔ [Σ_{a,b}, ηI] = 0", "max_residual", "unused", check_constcomm},
        {"P_KERCOMM_S", "ker [S_{a,b}, ηI] = ker H_η ⊕ ker H̃_η", "max_residual", "unused", check_kercomm_s},
        {"P_KERCOMM_SIG", "f ∈ ker [Σ_{a,b}, ηI] ⇔ (a-b)f ∈ ker [S_{a,b}, ηI]", "max_residual", "unused", check_kercomm_sig},
        {"P_ADJ", "S*_{a,b} = S_{c,d} ⇔ a - b ∈ ℂ", "max_positive_residual", "unused", check_adj},
        {"P_JMAP", "𝒥ψ = (a-b)ψ maps ker Σ_{a,b} injectively into ker S_{a,b}", "max_residual", "unused", check_jmap},
        {"P_RANK1", "[S_{a,b}, M_z] f = (a-b) f₋₁, [Σ_{a,b}, M_z] f = ((a-b)f)₋₁", "max_formula_residual", "unused", check_rank1},
        {"P_EQUIV", "PA + QB = [(I + PAB⁻¹Q)A](B⁻¹P + A⁻¹Q)[(I - QAB⁻¹P)B]", "max_residual", "unused", check_equiv},
        {"P_RH", "φ ∈ ker S_{a,b} ⇔ aφ₊ + bφ₋ = 0", "max_residual", "unused", check_rh},
        {"P_SCALE", "ker S_{a,b} = ker S_{aη,bη}", "unused", "unused", check_scale},
        {"P_KEREQ", "ker S_{a,b} = ker S_{ã,b̃} ⇔ a b̃ = ã b", "unused", "unused", check_kereq},
        {"P_UNIQUE", "φ₊ + φ₋ lies in exactly one paired kernel", "max_residual", "unused", check_unique},
        {"P_NONTRIV_S", "ker S_{a,b} ≠ {0} ⇔ a/b = I₋O₋O₊⁻¹", "max_witness_residual", "nontrivial_trials", check_nontriv_s},
        {"P_COBURN_S", "ker S_{a,b} = {0} or ker S_{b,a} = {0}", "unused", "nontrivial_trials", check_coburn_s},
        {"P_SIGMA_STRUCT", "ker Σ_{a,b} = L² ∩ a⁻¹H²₋ ∩ b⁻¹H²₊ and b ker Σ_{a,b} ⊆ ker T_{a/b}", "max_residual", "b_zero_free_trials", check_sigma_struct},
        {"P_NONTRIV_SIG", "ker Σ_{a,b} ≠ {0} ⇔ a/b = I₋O₋O₊⁻¹ with O₋/a, O₊/b ∈ L²", "max_witness_residual", "nontrivial_trials", check_nontriv_sig},
        {"P_SIGMA_INCL", "ker Σ_{a,b} ⊆ ker Σ_{ah₋,bh₊}, strict iff conj(h₋) or h₊ has an inner factor", "unused", "strict_trials", check_sigma_incl},
        {"P_COBURN_SIG", "ker Σ_{a,b} = {0} or ker Σ_{b,a} = {0}", "unused", "nontrivial_trials", check_coburn_sig},
        {"P_INV", "Σ_{ã,b̃} ker Σ_{a,b} ⊆ ker Σ_{a,b} for a,ã ∈ conj(H∞), b,b̃ ∈ H∞", "max_residual", "nontrivial_trials", check_inv},
        {"P_MODELINV", "Σ_{ã,b̃} K_θ ⊆ K_θ for ã ∈ conj(H∞), b̃ ∈ H∞", "max_residual", "unused", check_modelinv},
        {"P_ALMOST", "X ker T ⊆ ker T ⊕ F with dim F ≤ rank [X, T]", "max_defect", "unused", check_almost},
        {"P_DEFECT1", "z ker S_{a,b}, z̄ ker S_{a,b} ⊆ ker S_{a,b} ⊕ F with dim F ≤ 1", "max_defect", "unused", check_defect1},
        {"P_STAB", "f ∈ ker S_{a,b}, H_η f₊ = 0, H̃_η f₋ = 0 ⇒ ηf ∈ ker S_{a,b}", "max_residual", "unused", check_stab},
        {"P_FPLUS0", "ker S_{a,b} ≠ {0} ⇒ some f has f₊(0) ≠ 0 and some f has f₋₁ ≠ 0", "min_coefficient", "unused", check_fplus0},
    };
    return entries;
}

const Entry& lookup(std::string_view id) {
    for (const Entry& e : registry())
        if (e.id == id) return e;
    throw Error(ErrorCode::UnknownProperty, "unknown property '" + std::string(id) + "'");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

TrialOutcome guarded(const Entry& e, std::uint64_t seed, const RunConfig& config) {
    Rng rng(seed);
    try {
        return e.check(rng, config);
    } catch (const Error& err) {
        TrialOutcome t;
        t.pass = false;
        t.detail = {{"error", to_string(err.code())}, {"message", err.what()}};
        return t;
    }
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
    return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(trial_index)));
}

const std::vector<std::string>& property_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const Entry& e : registry()) v.emplace_back(e.id);
        return v;
    }();
    return ids;
}

std::string_view property_anchor(std::string_view id) { return lookup(id).anchor; }

TrialOutcome run_trial(std::string_view id, std::uint64_t seed, const RunConfig& config) {
    return guarded(lookup(id), seed, config);
}

PropertyReport run_property(std::string_view id, int trials, std::uint64_t master_seed, const RunConfig& config) {
    const Entry& e = lookup(id);
    const auto start = std::chrono::steady_clock::now();
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(std::max(0, trials)));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < trials; i = next++)
            outcomes[static_cast<std::size_t>(i)] = guarded(e, trial_seed(master_seed, i), config);
    };
    const int threads = std::clamp(config.parallelism, 1, std::max(1, trials));
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    PropertyReport r;
    r.property = std::string(e.id);
    r.anchor = std::string(e.anchor);
    r.trials = trials;
    double metric = 0.0;
    bool metric_seen = false;
    int flags = 0;
    for (int i = 0; i < trials; ++i) {
        const TrialOutcome& t = outcomes[static_cast<std::size_t>(i)];
        if (t.pass)
            ++r.passes;
        else
            r.failures.push_back({trial_seed(master_seed, i), t.inputs, t.detail});
        metric = metric_seen ? (e.metric.starts_with("min") ? std::min(metric, t.metric) : std::max(metric, t.metric)) : t.metric;
        metric_seen = true;
        flags += t.flags;
    }
    const Tolerances& tol = tolerances();
    r.tolerances = {{"eps_eq", tol.eps_eq}, {"eps_circle", tol.eps_circle}, {"eps_cluster", tol.eps_cluster},
                    {"rank_tol", tol.rank_tol}, {"min_gap", tol.min_gap}, {"oracle_N", config.oracle_N}};
    r.stats = json::object();
    if (e.metric != "unused") r.stats[std::string(e.metric)] = metric;
    if (e.flag != "unused") r.stats[std::string(e.flag)] = flags;
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

json to_json(const PropertyReport& r) {
    json failures = json::array();
    for (const TrialFailure& f : r.failures) failures.push_back({{"seed", f.seed}, {"inputs", f.inputs}, {"detail", f.detail}});
    return {{"property", r.property}, {"anchor", r.anchor}, {"trials", r.trials}, {"passes", r.passes},
            {"failures", failures}, {"tolerances", r.tolerances}, {"stats", r.stats}};
}

SuiteReport run_suite(const std::vector<std::string>& ids, int trials, std::uint64_t master_seed, const RunConfig& config) {
    if (ids.empty()) throw Error(ErrorCode::UnknownProperty, "empty property list");
    for (const auto& id : ids) lookup(id);
    SuiteReport s;
    for (const auto& id : ids) {
        s.reports.push_back(run_property(id, trials, master_seed, config));
        s.all_pass = s.all_pass && s.reports.back().passes == s.reports.back().trials;
    }
    return s;
}

json to_json(const SuiteReport& s) {
    json reports = json::array();
    for (const auto& r : s.reports) reports.push_back(to_json(r));
    return {{"all_pass", s.all_pass}, {"properties", reports}};
}

}  // namespace pairedk
