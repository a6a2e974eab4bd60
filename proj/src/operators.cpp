#include "pairedk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "pairedk/error.hpp"
#include "pairedk/svd.hpp"
#include "pairedk/symbol_json.hpp"

namespace pairedk {

std::string_view to_string(OpKind kind) {
    switch (kind) {
        case OpKind::Paired: return "paired";
        case OpKind::Transposed: return "transposed";
        case OpKind::Toeplitz: return "toeplitz";
        case OpKind::DualToeplitz: return "dual_toeplitz";
        case OpKind::Hankel: return "hankel";
        case OpKind::HankelTilde: return "hankel_tilde";
        case OpKind::Mult: return "mult";
        case OpKind::ProjPlus: return "proj_plus";
        case OpKind::ProjMinus: return "proj_minus";
        case OpKind::Compose: return "compose";
        case OpKind::Sum: return "sum";
        case OpKind::Scale: return "scale";
        case OpKind::Commutator: return "commutator";
    }
    return "?";
}

namespace {

constexpr int kMaxWindow = 4096;
constexpr double kTail = 1e-17;

void require_bounded(const Rational& s) {
    if (s.has_pole(Location::On)) throw Error(ErrorCode::SymbolNotBounded, "symbol has a pole on the unit circle");
}

Op leaf(OpKind kind, Rational a, SpaceTag dom, SpaceTag cod) {
    require_bounded(a);
    auto n = std::make_shared<OpNode>();
    n->kind = kind;
    n->a = std::move(a);
    n->domain = dom;
    n->codomain = cod;
    return n;
}

Op pair_node(OpKind kind, const Rational& a, const Rational& b) {
    require_bounded(a);
    require_bounded(b);
    auto n = std::make_shared<OpNode>();
    n->kind = kind;
    n->a = a;
    n->b = b;
    n->nondegenerate = !approx_equal(a, b, tolerances().eps_eq);
    return n;
}

bool accepts(SpaceTag dom, SpaceTag input) { return dom == SpaceTag::L2 || dom == input; }

// Narrowest common domain of two operators that are added together.
SpaceTag meet(SpaceTag p, SpaceTag q) {
    if (p == q || q == SpaceTag::L2) return p;
    if (p == SpaceTag::L2) return q;
    throw Error(ErrorCode::DomainMismatch, "operands act on incompatible spaces");
}

SpaceTag join(SpaceTag p, SpaceTag q) { return p == q ? p : SpaceTag::L2; }

void require_member(const Rational& f, SpaceTag dom) {
    if (dom != SpaceTag::L2 && !membership(f, dom))
        throw Error(ErrorCode::DomainMismatch, "input is not in " + std::string(to_string(dom)));
}

}  // namespace

Op paired(const Rational& a, const Rational& b) { return pair_node(OpKind::Paired, a, b); }
Op transposed(const Rational& a, const Rational& b) { return pair_node(OpKind::Transposed, a, b); }
Op toeplitz(const Rational& a) { return leaf(OpKind::Toeplitz, a, SpaceTag::H2plus, SpaceTag::H2plus); }
Op dual_toeplitz(const Rational& a) { return leaf(OpKind::DualToeplitz, a, SpaceTag::H2minus, SpaceTag::H2minus); }
Op hankel(const Rational& a) { return leaf(OpKind::Hankel, a, SpaceTag::H2plus, SpaceTag::H2minus); }
Op hankel_tilde(const Rational& a) { return leaf(OpKind::HankelTilde, a, SpaceTag::H2minus, SpaceTag::H2plus); }
Op mult(const Rational& eta) { return leaf(OpKind::Mult, eta, SpaceTag::L2, SpaceTag::L2); }
Op proj_plus() { return leaf(OpKind::ProjPlus, Rational(1.0), SpaceTag::L2, SpaceTag::H2plus); }
Op proj_minus() { return leaf(OpKind::ProjMinus, Rational(1.0), SpaceTag::L2, SpaceTag::H2minus); }

Op compose(Op x, Op y) {
    if (!accepts(x->domain, y->codomain))
        throw Error(ErrorCode::DomainMismatch, std::string(to_string(x->kind)) + " cannot follow " + std::string(to_string(y->kind)));
    auto n = std::make_shared<OpNode>();
    n->kind = OpKind::Compose;
    n->domain = y->domain;
    n->codomain = x->codomain;
    n->x = std::move(x);
    n->y = std::move(y);
    return n;
}

Op sum(Op x, Op y) {
    auto n = std::make_shared<OpNode>();
    n->kind = OpKind::Sum;
    n->domain = meet(x->domain, y->domain);
    n->codomain = join(x->codomain, y->codomain);
    n->x = std::move(x);
    n->y = std::move(y);
    return n;
}

Op scale(cplx lambda, Op x) {
    auto n = std::make_shared<OpNode>();
    n->kind = OpKind::Scale;
    n->lambda = lambda;
    n->domain = x->domain;
    n->codomain = x->codomain;
    n->x = std::move(x);
    return n;
}

Op difference(Op x, Op y) { return sum(std::move(x), scale(-1.0, std::move(y))); }

Op commutator(Op x, Op y) {
    // Both orders must be composable.
    const Op xy = compose(x, y);
    const Op yx = compose(y, x);
    auto n = std::make_shared<OpNode>();
    n->kind = OpKind::Commutator;
    n->domain = meet(xy->domain, yx->domain);
    n->codomain = join(xy->codomain, yx->codomain);
    n->x = std::move(x);
    n->y = std::move(y);
    return n;
}

Op adjoint(const Op& x) {
    switch (x->kind) {
        case OpKind::Paired: return transposed(x->a.circle_conjugate(), x->b.circle_conjugate());
        case OpKind::Transposed: return paired(x->a.circle_conjugate(), x->b.circle_conjugate());
        case OpKind::Toeplitz: return toeplitz(x->a.circle_conjugate());
        case OpKind::DualToeplitz: return dual_toeplitz(x->a.circle_conjugate());
        case OpKind::Hankel: return hankel_tilde(x->a.circle_conjugate());
        case OpKind::HankelTilde: return hankel(x->a.circle_conjugate());
        case OpKind::Mult: return mult(x->a.circle_conjugate());
        case OpKind::ProjPlus:
        case OpKind::ProjMinus: return x;
        case OpKind::Compose: return compose(adjoint(x->y), adjoint(x->x));
        case OpKind::Sum: return sum(adjoint(x->x), adjoint(x->y));
        case OpKind::Scale: return scale(std::conj(x->lambda), adjoint(x->x));
        case OpKind::Commutator: return commutator(adjoint(x->y), adjoint(x->x));
    }
    throw Error(ErrorCode::DomainMismatch, "unknown operator node");
}

namespace {

const std::map<std::string, OpKind, std::less<>> kKinds = {
    {"paired", OpKind::Paired},         {"transposed", OpKind::Transposed},
    {"toeplitz", OpKind::Toeplitz},     {"dual_toeplitz", OpKind::DualToeplitz},
    {"hankel", OpKind::Hankel},         {"hankel_tilde", OpKind::HankelTilde},
    {"mult", OpKind::Mult},             {"proj_plus", OpKind::ProjPlus},
    {"proj_minus", OpKind::ProjMinus},  {"compose", OpKind::Compose},
    {"sum", OpKind::Sum},               {"scale", OpKind::Scale},
    {"commutator", OpKind::Commutator},
};

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorCode::MalformedSymbol, std::string("operator JSON needs \"") + key + "\"");
    return j[key];
}

}  // namespace

Op op_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
        throw Error(ErrorCode::MalformedSymbol, "operator JSON needs a string \"op\"");
    const std::string name = j["op"].get<std::string>();
    if (name == "adjoint") return adjoint(op_from_json(field(j, "x")));
    const auto it = kKinds.find(name);
    if (it == kKinds.end()) throw Error(ErrorCode::MalformedSymbol, "unknown operator \"" + name + "\"");
    const auto sym = [&](const char* key) { return symbol_from_json(field(j, key)); };
    const auto sub = [&](const char* key) { return op_from_json(field(j, key)); };
    switch (it->second) {
        case OpKind::Paired: return paired(sym("a"), sym("b"));
        case OpKind::Transposed: return transposed(sym("a"), sym("b"));
        case OpKind::Toeplitz: return toeplitz(sym("a"));
        case OpKind::DualToeplitz: return dual_toeplitz(sym("a"));
        case OpKind::Hankel: return hankel(sym("a"));
        case OpKind::HankelTilde: return hankel_tilde(sym("a"));
        case OpKind::Mult: return mult(j.contains("eta") ? sym("eta") : sym("a"));
        case OpKind::ProjPlus: return proj_plus();
        case OpKind::ProjMinus: return proj_minus();
        case OpKind::Compose: return compose(sub("x"), sub("y"));
        case OpKind::Sum: return sum(sub("x"), sub("y"));
        case OpKind::Scale: {
            const auto& l = field(j, "lambda");
            const cplx lambda = l.is_array() ? cplx{l.at(0).get<double>(), l.at(1).get<double>()} : cplx{l.get<double>()};
            return scale(lambda, sub("x"));
        }
        case OpKind::Commutator: return commutator(sub("x"), sub("y"));
    }
    throw Error(ErrorCode::MalformedSymbol, "unknown operator");
}

nlohmann::json op_to_json(const Op& x) {
    nlohmann::json j{{"op", std::string(to_string(x->kind))}};
    switch (x->kind) {
        case OpKind::Paired:
        case OpKind::Transposed:
            j["a"] = symbol_to_json(x->a);
            j["b"] = symbol_to_json(x->b);
            break;
        case OpKind::Mult: j["eta"] = symbol_to_json(x->a); break;
        case OpKind::Toeplitz:
        case OpKind::DualToeplitz:
        case OpKind::Hankel:
        case OpKind::HankelTilde: j["a"] = symbol_to_json(x->a); break;
        case OpKind::ProjPlus:
        case OpKind::ProjMinus: break;
        case OpKind::Scale:
            j["lambda"] = {x->lambda.real(), x->lambda.imag()};
            j["x"] = op_to_json(x->x);
            break;
        case OpKind::Compose:
        case OpKind::Sum:
        case OpKind::Commutator:
            j["x"] = op_to_json(x->x);
            j["y"] = op_to_json(x->y);
            break;
    }
    return j;
}

Rational apply_exact(const Op& x, const Rational& f) {
    if (f.has_pole(Location::On)) throw Error(ErrorCode::PoleOnCircle, "input is not in L2");
    require_member(f, x->domain);
    const auto plus = [](const Rational& g) { return riesz_project(g, Side::Plus); };
    const auto minus = [](const Rational& g) { return riesz_project(g, Side::Minus); };
    switch (x->kind) {
        case OpKind::Paired: return x->a * plus(f) + x->b * minus(f);
        case OpKind::Transposed: return plus(x->a * f) + minus(x->b * f);
        case OpKind::Toeplitz:
        case OpKind::HankelTilde: return plus(x->a * f);
        case OpKind::DualToeplitz:
        case OpKind::Hankel: return minus(x->a * f);
        case OpKind::Mult: return x->a * f;
        case OpKind::ProjPlus: return plus(f);
        case OpKind::ProjMinus: return minus(f);
        case OpKind::Compose: return apply_exact(x->x, apply_exact(x->y, f));
        case OpKind::Sum: return apply_exact(x->x, f) + apply_exact(x->y, f);
        case OpKind::Scale: return x->lambda * apply_exact(x->x, f);
        case OpKind::Commutator:
            return apply_exact(x->x, apply_exact(x->y, f)) - apply_exact(x->y, apply_exact(x->x, f));
    }
    throw Error(ErrorCode::DomainMismatch, "unknown operator node");
}

namespace {

int symbol_bandwidth(const Rational& s) {
    if (s.is_zero()) return 0;
    return std::max(std::abs(s.num().lo()), std::abs(s.num().hi())) + s.pole_degree();
}

}  // namespace

int bandwidth(const Op& x) {
    switch (x->kind) {
        case OpKind::Paired:
        case OpKind::Transposed: return std::max(symbol_bandwidth(x->a), symbol_bandwidth(x->b));
        case OpKind::ProjPlus:
        case OpKind::ProjMinus: return 0;
        case OpKind::Compose:
        case OpKind::Commutator: return bandwidth(x->x) + bandwidth(x->y);
        case OpKind::Sum: return std::max(bandwidth(x->x), bandwidth(x->y));
        case OpKind::Scale: return bandwidth(x->x);
        default: return symbol_bandwidth(x->a);
    }
}

namespace {

// Fourier coefficients c[i] of z^(lo + i), trimmed where they fall below the tail.
struct Band {
    int lo = 0;
    std::vector<cplx> c;
};

Band symbol_band(const Rational& s) {
    Band band;
    if (s.is_zero()) return band;
    if (s.is_laurent()) {
        band.lo = s.num().lo();
        band.c = s.num().dense();
        return band;
    }
    const PartialFractions pf = partial_fractions(s);
    const int K = pf.tail_index(kTail);
    band.c = pf.coefficients(-K, K);
    band.lo = -K;
    double scale = 0.0;
    for (cplx c : band.c) scale = std::max(scale, std::abs(c));
    const double cut = kTail * scale;
    std::size_t first = 0, last = band.c.size();
    while (first < last && std::abs(band.c[first]) <= cut) ++first;
    while (last > first && std::abs(band.c[last - 1]) <= cut) --last;
    band.c = std::vector<cplx>(band.c.begin() + static_cast<std::ptrdiff_t>(first), band.c.begin() + static_cast<std::ptrdiff_t>(last));
    band.lo += static_cast<int>(first);
    return band;
}

// Rows lo..lo+rows-1 of the coefficient images of the input columns.
struct Block {
    int lo = 0;
    Eigen::MatrixXcd m;
    double scale = 0.0;
    int hi() const { return lo + static_cast<int>(m.rows()) - 1; }
};

Block project(const Block& b, Side side) {
    const int keep_lo = side == Side::Plus ? std::max(b.lo, 0) : b.lo;
    const int keep_hi = side == Side::Plus ? b.hi() : std::min(b.hi(), -1);
    Block out;
    out.scale = b.scale;
    if (keep_hi < keep_lo) {
        out.m = Eigen::MatrixXcd::Zero(0, b.m.cols());
        return out;
    }
    out.lo = keep_lo;
    out.m = b.m.middleRows(keep_lo - b.lo, keep_hi - keep_lo + 1);
    return out;
}

Block multiply(const Band& band, const Block& b) {
    Block out;
    out.scale = b.scale;
    if (band.c.empty() || b.m.rows() == 0) {
        out.m = Eigen::MatrixXcd::Zero(0, b.m.cols());
        return out;
    }
    const auto rows = b.m.rows();
    out.lo = b.lo + band.lo;
    out.m = Eigen::MatrixXcd::Zero(rows + static_cast<Eigen::Index>(band.c.size()) - 1, b.m.cols());
    for (std::size_t r = 0; r < band.c.size(); ++r)
        if (band.c[r] != cplx{}) out.m.middleRows(static_cast<Eigen::Index>(r), rows) += band.c[r] * b.m;
    out.scale = std::max(b.scale, out.m.norm());
    return out;
}

Block add(const Block& x, const Block& y, cplx sy = 1.0) {
    if (y.m.rows() == 0) {
        Block out = x;
        out.scale = std::max(x.scale, std::abs(sy) * y.scale);
        return out;
    }
    if (x.m.rows() == 0) {
        Block out = y;
        out.m *= sy;
        out.scale = std::max(x.scale, std::abs(sy) * y.scale);
        return out;
    }
    Block out;
    out.lo = std::min(x.lo, y.lo);
    const int hi = std::max(x.hi(), y.hi());
    out.m = Eigen::MatrixXcd::Zero(hi - out.lo + 1, x.m.cols());
    out.m.middleRows(x.lo - out.lo, x.m.rows()) += x.m;
    out.m.middleRows(y.lo - out.lo, y.m.rows()) += sy * y.m;
    out.scale = std::max({x.scale, std::abs(sy) * y.scale, out.m.norm()});
    return out;
}

class Assembler {
public:
    Block run(const Op& x, const Block& in) {
        switch (x->kind) {
            case OpKind::Paired:
                return add(multiply(band(x->a), project(in, Side::Plus)), multiply(band(x->b), project(in, Side::Minus)));
            case OpKind::Transposed:
                return add(project(multiply(band(x->a), in), Side::Plus), project(multiply(band(x->b), in), Side::Minus));
            case OpKind::Toeplitz: return project(multiply(band(x->a), project(in, Side::Plus)), Side::Plus);
            case OpKind::DualToeplitz: return project(multiply(band(x->a), project(in, Side::Minus)), Side::Minus);
            case OpKind::Hankel: return project(multiply(band(x->a), project(in, Side::Plus)), Side::Minus);
            case OpKind::HankelTilde: return project(multiply(band(x->a), project(in, Side::Minus)), Side::Plus);
            case OpKind::Mult: return multiply(band(x->a), in);
            case OpKind::ProjPlus: return project(in, Side::Plus);
            case OpKind::ProjMinus: return project(in, Side::Minus);
            case OpKind::Compose: return run(x->x, run(x->y, in));
            case OpKind::Sum: return add(run(x->x, in), run(x->y, in));
            case OpKind::Scale: {
                Block out = run(x->x, in);
                out.m *= x->lambda;
                out.scale *= std::abs(x->lambda);
                return out;
            }
            case OpKind::Commutator: return add(run(x->x, run(x->y, in)), run(x->y, run(x->x, in)), -1.0);
        }
        throw Error(ErrorCode::DomainMismatch, "unknown operator node");
    }

private:
    const Band& band(const Rational& s) {
        const auto key = &s;
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, symbol_band(s)).first;
        return it->second;
    }

    std::map<const Rational*, Band> cache_;
};

}  // namespace

TruncationMatrix truncate(const Op& x, int N) {
    if (N < 0 || N > kMaxWindow) throw Error(ErrorCode::WindowOverflow, "N must lie in [0, 4096]");
    if (N < bandwidth(x)) throw Error(ErrorCode::WindowOverflow, "N is below the operator bandwidth");
    TruncationMatrix t;
    switch (x->domain) {
        case SpaceTag::H2plus: t.in_lo = 0, t.in_hi = N; break;
        case SpaceTag::H2minus: t.in_lo = -N, t.in_hi = -1; break;
        default: t.in_lo = -N, t.in_hi = N; break;
    }
    const int cols = t.in_hi - t.in_lo + 1;
    Block in{t.in_lo, Eigen::MatrixXcd::Identity(cols, cols), std::sqrt(static_cast<double>(cols))};
    Block out = Assembler{}.run(x, in);
    if (out.m.rows() == 0) {
        // The zero operator still gets a row for every input mode.
        out.lo = t.in_lo;
        out.m = Eigen::MatrixXcd::Zero(cols, cols);
    }
    t.out_lo = out.lo;
    t.out_hi = out.hi();
    t.scale = out.scale;
    t.entries = std::move(out.m);
    return t;
}

Eigen::VectorXcd coefficient_vector(const Rational& f, int lo, int hi) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(std::max(0, hi - lo + 1));
    if (f.is_zero() || hi < lo) return v;
    if (f.is_laurent()) {
        for (const auto& [k, c] : f.num().coeffs())
            if (k >= lo && k <= hi) v(k - lo) = c;
        return v;
    }
    const PartialFractions pf = partial_fractions(f);
    const auto c = pf.coefficients(lo, hi);
    for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i];
    return v;
}

RankResult rank_from_singular_values(const Eigen::VectorXd& s, double tol, double noise) {
    RankResult r;
    r.singular_values.assign(s.data(), s.data() + s.size());
    const double smax = s.size() ? s(0) : 0.0;
    if (smax <= noise) {
        r.gap = std::numeric_limits<double>::infinity();
        return r;
    }
    const double cut = std::max(tol * smax, noise);
    while (r.rank < s.size() && s(r.rank) > cut) ++r.rank;
    if (r.rank == s.size())
        r.gap = s(s.size() - 1) / cut;
    else
        r.gap = s(r.rank) == 0.0 ? std::numeric_limits<double>::infinity() : s(r.rank - 1) / s(r.rank);
    r.determinate = r.gap >= tolerances().min_gap;
    return r;
}

RankResult numerical_rank(const Eigen::MatrixXcd& m, double tol, double noise) {
    if (m.size() == 0) return rank_from_singular_values(Eigen::VectorXd(), tol, noise);
    return rank_from_singular_values(singular_values(m), tol, noise);
}

RankResult numerical_rank(const TruncationMatrix& m, double tol) {
    return numerical_rank(m.entries, tol, tolerances().eps_drop * m.scale);
}

double operator_norm(const Op& x, int N) {
    const TruncationMatrix t = truncate(x, N);
    if (t.entries.size() == 0) return 0.0;
    const Eigen::MatrixXcd g = t.entries.adjoint() * t.entries;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

double adjoint_residual(const Op& x, const Op& y, const std::vector<std::pair<Rational, Rational>>& probes) {
    double worst = 0.0;
    for (const auto& [f, g] : probes)
        worst = std::max(worst, std::abs(inner_product(apply_exact(x, f), g) - inner_product(f, apply_exact(y, g))));
    return worst;
}

std::vector<std::pair<Rational, Rational>> monomial_probes(int K) {
    std::vector<std::pair<Rational, Rational>> out;
    for (int j = -K; j <= K; ++j)
        for (int k = -K; k <= K; ++k) out.emplace_back(Rational::z(j), Rational::z(k));
    return out;
}

}  // namespace pairedk
