#include "pairedk/riesz.hpp"

#include <algorithm>
#include <cmath>

#include "pairedk/error.hpp"

namespace pairedk {

std::string_view to_string(SpaceTag tag) {
    switch (tag) {
        case SpaceTag::L2: return "L2";
        case SpaceTag::H2plus: return "H2plus";
        case SpaceTag::H2minus: return "H2minus";
        case SpaceTag::Hinf: return "Hinf";
        case SpaceTag::HinfBar: return "HinfBar";
        case SpaceTag::InnerPlus: return "InnerPlus";
        case SpaceTag::OuterPlus: return "OuterPlus";
        case SpaceTag::OuterMinus: return "OuterMinus";
    }
    return "?";
}

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Power series of (a + w)^e truncated after w^order.
std::vector<cplx> linear_power_series(cplx a, int e, int order) {
    std::vector<cplx> s(static_cast<std::size_t>(order + 1));
    for (int k = 0; k <= std::min(e, order); ++k) s[static_cast<std::size_t>(k)] = binomial(e, k) * std::pow(a, e - k);
    return s;
}

std::vector<cplx> series_mul(const std::vector<cplx>& p, const std::vector<cplx>& q, int order) {
    std::vector<cplx> r(static_cast<std::size_t>(order + 1));
    for (int i = 0; i <= order && i < static_cast<int>(p.size()); ++i)
        for (int j = 0; i + j <= order && j < static_cast<int>(q.size()); ++j)
            r[static_cast<std::size_t>(i + j)] += p[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(j)];
    return r;
}

std::vector<cplx> series_div(const std::vector<cplx>& p, const std::vector<cplx>& q, int order) {
    std::vector<cplx> r(static_cast<std::size_t>(order + 1));
    for (int k = 0; k <= order; ++k) {
        cplx acc = k < static_cast<int>(p.size()) ? p[static_cast<std::size_t>(k)] : cplx{};
        for (int j = 1; j <= k && j < static_cast<int>(q.size()); ++j)
            acc -= q[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(k - j)];
        r[static_cast<std::size_t>(k)] = acc / q[0];
    }
    return r;
}

void require_no_circle_poles(const Rational& f) {
    for (const auto& p : f.poles())
        if (p.loc == Location::On) throw Error(ErrorCode::PoleOnCircle, "symbol has a pole on the unit circle");
}

// Principal parts of Q / prod (z - p)^m at each pole, from Taylor expansions.
std::vector<PrincipalPart> principal_parts(const std::vector<cplx>& Q, const std::vector<Root>& poles) {
    std::vector<PrincipalPart> out;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        const cplx P = poles[i].value;
        const int m = poles[i].multiplicity;
        const int order = m - 1;
        const auto TQ = dense::taylor_shift(Q, P, order);
        std::vector<cplx> other{1.0};
        for (std::size_t j = 0; j < poles.size(); ++j) {
            if (j == i) continue;
            other = series_mul(other, linear_power_series(P - poles[j].value, poles[j].multiplicity, order), order);
        }
        const auto h = series_div(TQ, other, order);
        PrincipalPart part{P, poles[i].loc, std::vector<cplx>(static_cast<std::size_t>(m))};
        for (int k = 1; k <= m; ++k) part.c[static_cast<std::size_t>(k - 1)] = h[static_cast<std::size_t>(m - k)];
        out.push_back(std::move(part));
    }
    return out;
}

// Fourier coefficient n of a sum of principal parts.
cplx parts_coefficient(const std::vector<PrincipalPart>& parts, int n) {
    cplx v{};
    for (const auto& part : parts) {
        const int m = static_cast<int>(part.c.size());
        for (int j = 1; j <= m; ++j) {
            const cplx c = part.c[static_cast<std::size_t>(j - 1)];
            if (c == cplx{}) continue;
            if (part.loc == Location::Inside && n <= -1) {
                const int e = -n - j;
                if (e >= 0) v += c * binomial(e + j - 1, j - 1) * std::pow(part.pole, e);
            } else if (part.loc == Location::Outside && n >= 0) {
                v += c * std::pow(-part.pole, -j) * binomial(n + j - 1, j - 1) * std::pow(part.pole, -n);
            }
        }
    }
    return v;
}

// Numerator of sum_k c_k (z - P)^-k over (z - P)^m.
std::vector<cplx> part_numerator(const PrincipalPart& part) {
    const int m = static_cast<int>(part.c.size());
    std::vector<cplx> num{};
    std::vector<cplx> power{1.0};
    for (int k = m; k >= 1; --k) {
        if (num.size() < power.size()) num.resize(power.size());
        for (std::size_t i = 0; i < power.size(); ++i) num[i] += part.c[static_cast<std::size_t>(k - 1)] * power[i];
        power = dense::multiply(power, {-part.pole, 1.0});
    }
    return num;
}

std::vector<cplx> dense_add(std::vector<cplx> p, const std::vector<cplx>& q, cplx sq = 1.0) {
    if (p.size() < q.size()) p.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) p[i] += sq * q[i];
    return p;
}

}  // namespace

cplx PartialFractions::coefficient(int k) const {
    const int n = k + shift;
    if (recip.empty()) {
        return n >= 0 && n < static_cast<int>(numer.size()) ? numer[static_cast<std::size_t>(n)] : cplx{};
    }
    cplx v{};
    for (std::size_t j = 0; j < numer.size(); ++j)
        if (numer[j] != cplx{}) v += numer[j] * parts_coefficient(recip, n - static_cast<int>(j));
    return v;
}

std::vector<cplx> PartialFractions::coefficients(int kmin, int kmax) const {
    std::vector<cplx> out;
    if (kmax < kmin) return out;
    const int deg = static_cast<int>(numer.size()) - 1;
    if (recip.empty()) {
        for (int k = kmin; k <= kmax; ++k) out.push_back(coefficient(k));
        return out;
    }
    // Series of 1/D over the index range the convolution touches.
    const int rlo = kmin + shift - deg;
    const int rhi = kmax + shift;
    std::vector<cplx> r(static_cast<std::size_t>(rhi - rlo + 1));
    for (int i = rlo; i <= rhi; ++i) r[static_cast<std::size_t>(i - rlo)] = parts_coefficient(recip, i);
    out.assign(static_cast<std::size_t>(kmax - kmin + 1), cplx{});
    for (int k = kmin; k <= kmax; ++k) {
        cplx v{};
        for (int j = 0; j <= deg; ++j)
            if (numer[static_cast<std::size_t>(j)] != cplx{}) v += numer[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(k + shift - j - rlo)];
        out[static_cast<std::size_t>(k - kmin)] = v;
    }
    return out;
}

int PartialFractions::tail_index(double tail) const {
    const int deg = static_cast<int>(numer.size()) - 1;
    int K = std::max(shift, std::abs(deg - shift));
    for (const auto& part : recip) {
        const int m = static_cast<int>(part.c.size());
        const double rho = part.loc == Location::Inside ? std::abs(part.pole) : 1.0 / std::abs(part.pole);
        double cmax = 0.0;
        for (cplx c : part.c) cmax = std::max(cmax, std::abs(c));
        // Coefficient n of a part is at most cmax (n + m)^(m-1) rho^n / min(1, |pole|)^m,
        // measured against the largest coefficient of the part.
        const double pref = std::pow(part.loc == Location::Outside ? rho : 1.0 / std::max(1e-300, std::abs(part.pole)), m);
        int n = 0;
        while (n < 1000000) {
            const double term = pref * std::pow(n + m, m - 1) * std::pow(rho, n);
            if (term <= tail) break;
            n += 1 + n / 8;
        }
        K = std::max(K, n + m + deg + shift);
    }
    return K;
}

PartialFractions partial_fractions(const Rational& f) {
    require_no_circle_poles(f);
    PartialFractions pf;
    if (f.is_zero()) return pf;
    const LaurentPoly& num = f.num();
    pf.shift = std::max(0, -num.lo());
    pf.numer.assign(static_cast<std::size_t>(num.hi() + pf.shift + 1), cplx{});
    for (const auto& [k, c] : num.coeffs()) pf.numer[static_cast<std::size_t>(k + pf.shift)] = c;
    if (f.is_laurent()) return pf;
    pf.recip = principal_parts({1.0}, f.poles());
    pf.parts = principal_parts(pf.numer, f.poles());
    return pf;
}

cplx fourier_coefficient(const Rational& f, int k) {
    if (f.is_laurent()) return f.num().coeff(k);
    return partial_fractions(f).coefficient(k);
}

Rational riesz_project(const Rational& f, Side side) {
    require_no_circle_poles(f);
    if (f.is_laurent()) {
        const auto& p = f.num();
        return side == Side::Plus ? Rational(p.restricted(0, std::max(0, p.hi())))
                                  : Rational(p.restricted(std::min(-1, p.lo()), -1));
    }
    // f = z^-s g with g = N / (D_in D_out). P-f = z^-s (g_in + T) where g_in is
    // the sum of the inside principal parts and T the modes 0..s-1 of g.
    const PartialFractions pf = partial_fractions(f);
    const int s = pf.shift;
    std::vector<Root> inside, outside;
    for (const auto& p : f.poles()) (p.loc == Location::Inside ? inside : outside).push_back(p);

    std::vector<std::pair<cplx, int>> in_roots, out_roots;
    for (const auto& p : inside) in_roots.emplace_back(p.value, p.multiplicity);
    for (const auto& p : outside) out_roots.emplace_back(p.value, p.multiplicity);
    const std::vector<cplx> D_in = dense::from_roots(in_roots);
    const std::vector<cplx> D_out = dense::from_roots(out_roots);

    // M_in / D_in = g_in.
    std::vector<cplx> M_in;
    for (const auto& part : pf.parts) {
        if (part.loc != Location::Inside) continue;
        std::vector<std::pair<cplx, int>> rest;
        for (const auto& p : inside)
            if (p.value != part.pole) rest.emplace_back(p.value, p.multiplicity);
        M_in = dense_add(M_in, dense::multiply(part_numerator(part), dense::from_roots(rest)));
    }
    std::vector<cplx> T(static_cast<std::size_t>(std::max(0, s)));
    if (s > 0) {
        const auto c = pf.coefficients(-s, -1);  // modes 0..s-1 of g
        std::copy(c.begin(), c.end(), T.begin());
    }
    // Minus side numerator over z^s D_in: M_in + T D_in.
    std::vector<cplx> minus_num = dense_add(M_in, dense::multiply(T, D_in));

    if (side == Side::Minus) {
        if (minus_num.empty()) return {};
        return Rational::from_parts(LaurentPoly::from_dense(minus_num, -s), inside);
    }
    // P+f = (N - (M_in + T D_in) D_out) / (z^s D_in D_out); the division by
    // z^s D_in is exact, so it runs as synthetic division on the inside roots.
    LaurentPoly rest = LaurentPoly::from_dense(dense_add(pf.numer, dense::multiply(minus_num, D_out), -1.0));
    for (const auto& p : inside)
        for (int i = 0; i < p.multiplicity; ++i) rest = rest.divided_by_linear(p.value);
    rest = rest.restricted(s, std::max(s, rest.hi())).shifted(-s);
    return Rational::from_parts(rest, outside);
}

bool membership(const Rational& f, SpaceTag space) {
    const bool zero = f.is_zero();
    const bool l2 = !f.has_pole(Location::On);
    const bool analytic_in = l2 && !f.has_pole(Location::Inside);
    const bool analytic_out = l2 && !f.has_pole(Location::Outside);
    const int d = f.pole_degree();
    switch (space) {
        case SpaceTag::L2: return l2;
        case SpaceTag::H2plus:
        case SpaceTag::Hinf: return analytic_in;
        case SpaceTag::H2minus: return zero || (analytic_out && f.num().hi() < d);
        case SpaceTag::HinfBar: return zero || (analytic_out && f.num().hi() <= d);
        case SpaceTag::InnerPlus: {
            if (zero || !analytic_in) return false;
            for (cplx z : circle_probes(probe_count(f)))
                if (std::abs(std::abs(f(z)) - 1.0) > 1e-9) return false;
            return true;
        }
        case SpaceTag::OuterPlus: {
            if (zero || !analytic_in || f.num().lo() != 0) return false;
            for (const auto& z : f.zpk().zeros)
                if (z.loc == Location::Inside) return false;
            return true;
        }
        case SpaceTag::OuterMinus: {
            if (zero || !membership(f, SpaceTag::H2minus)) return false;
            return membership(f.circle_conjugate().shifted(-1), SpaceTag::OuterPlus);
        }
    }
    return false;
}

namespace {

constexpr double kInnerTail = 1e-17;

struct Series {
    PartialFractions pf;
    int K;
};

Series series_of(const Rational& f) {
    Series s{partial_fractions(f), 0};
    s.K = s.pf.tail_index(kInnerTail);
    return s;
}

}  // namespace

cplx inner_product(const Rational& f, const Rational& g) {
    const Series sf = series_of(f);
    const Series sg = series_of(g);
    const int K = std::max(sf.K, sg.K);
    const auto a = sf.pf.coefficients(-K, K);
    const auto b = sg.pf.coefficients(-K, K);
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s;
}

double l2_norm(const Rational& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

double l2_distance(const Rational& f, const Rational& g) {
    const Series sf = series_of(f);
    const Series sg = series_of(g);
    const int K = std::max(sf.K, sg.K);
    const auto a = sf.pf.coefficients(-K, K);
    const auto b = sg.pf.coefficients(-K, K);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

Rational rf_normalize(const LaurentPoly& num, const LaurentPoly& den) { return Rational::ratio(num, den); }

}  // namespace pairedk
