#include "pairedk/laurent.hpp"

#include <algorithm>
#include <cmath>

#include "pairedk/error.hpp"

namespace pairedk {

namespace {

Tolerances g_tolerances;

void require_finite(cplx c) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw Error(ErrorCode::MalformedSymbol, "non-finite coefficient");
}

}  // namespace

const Tolerances& tolerances() { return g_tolerances; }
void set_tolerances(const Tolerances& t) { g_tolerances = t; }

LaurentPoly::LaurentPoly(std::map<int, cplx> coeffs) : coeffs_(std::move(coeffs)) {
    for (const auto& [k, c] : coeffs_) require_finite(c);
    prune(max_abs());
}

LaurentPoly::LaurentPoly(cplx constant) {
    require_finite(constant);
    if (constant != cplx{}) coeffs_.emplace(0, constant);
}

LaurentPoly LaurentPoly::monomial(int k, cplx c) {
    LaurentPoly p;
    require_finite(c);
    if (c != cplx{}) p.coeffs_.emplace(k, c);
    return p;
}

LaurentPoly LaurentPoly::from_dense(const std::vector<cplx>& c, int lo) {
    std::map<int, cplx> m;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != cplx{}) m.emplace(lo + static_cast<int>(i), c[i]);
    return LaurentPoly(std::move(m));
}

int LaurentPoly::lo() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
int LaurentPoly::hi() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

cplx LaurentPoly::coeff(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? cplx{} : it->second;
}

double LaurentPoly::max_abs() const {
    double m = 0.0;
    for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double LaurentPoly::l1_norm() const {
    double s = 0.0;
    for (const auto& [k, c] : coeffs_) s += std::abs(c);
    return s;
}

std::vector<cplx> LaurentPoly::dense() const {
    if (coeffs_.empty()) return {};
    std::vector<cplx> out(static_cast<std::size_t>(hi() - lo() + 1));
    for (const auto& [k, c] : coeffs_) out[static_cast<std::size_t>(k - lo())] = c;
    return out;
}

cplx LaurentPoly::operator()(cplx z) const {
    if (coeffs_.empty()) return {};
    // Horner on the dense polynomial part, then the monomial shift.
    const auto d = dense();
    cplx acc{};
    for (auto it = d.rbegin(); it != d.rend(); ++it) acc = acc * z + *it;
    return acc * std::pow(z, lo());
}

double LaurentPoly::magnitude_at(cplx z) const {
    const double r = std::abs(z);
    double s = 0.0;
    for (const auto& [k, c] : coeffs_) s += std::abs(c) * std::pow(r, k);
    return s;
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly out;
    for (const auto& [e, c] : coeffs_) out.coeffs_.emplace(e + k, c);
    return out;
}

LaurentPoly LaurentPoly::derivative() const {
    LaurentPoly out;
    for (const auto& [e, c] : coeffs_)
        if (e != 0) out.coeffs_.emplace(e - 1, static_cast<double>(e) * c);
    return out;
}

LaurentPoly LaurentPoly::circle_conjugate() const {
    LaurentPoly out;
    for (const auto& [e, c] : coeffs_) out.coeffs_.emplace(-e, std::conj(c));
    return out;
}

LaurentPoly LaurentPoly::restricted(int lo_keep, int hi_keep) const {
    LaurentPoly out;
    for (auto it = coeffs_.lower_bound(lo_keep); it != coeffs_.end() && it->first <= hi_keep; ++it)
        out.coeffs_.insert(*it);
    return out;
}

LaurentPoly LaurentPoly::pruned(double reference) const {
    LaurentPoly out = *this;
    out.prune(reference);
    return out;
}

void LaurentPoly::prune(double reference) {
    const double cut = tolerances().eps_drop * reference;
    std::erase_if(coeffs_, [cut](const auto& kv) {
        return kv.second == cplx{} || std::abs(kv.second) <= cut;
    });
}

LaurentPoly operator+(const LaurentPoly& f, const LaurentPoly& g) {
    LaurentPoly out = f;
    for (const auto& [k, c] : g.coeffs_) out.coeffs_[k] += c;
    out.prune(std::max(f.max_abs(), g.max_abs()));
    return out;
}

LaurentPoly operator-(const LaurentPoly& f, const LaurentPoly& g) { return f + (-g); }

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly out = *this;
    for (auto& [k, c] : out.coeffs_) c = -c;
    return out;
}

LaurentPoly operator*(const LaurentPoly& f, const LaurentPoly& g) {
    LaurentPoly out;
    for (const auto& [i, a] : f.coeffs_)
        for (const auto& [j, b] : g.coeffs_) out.coeffs_[i + j] += a * b;
    out.prune(f.max_abs() * g.max_abs());
    return out;
}

LaurentPoly operator*(cplx s, const LaurentPoly& f) {
    require_finite(s);
    if (s == cplx{}) return {};
    LaurentPoly out = f;
    for (auto& [k, c] : out.coeffs_) c *= s;
    return out;
}

LaurentPoly LaurentPoly::divided_by_linear(cplx root, cplx* remainder) const {
    if (coeffs_.empty()) {
        if (remainder) *remainder = {};
        return {};
    }
    const auto d = dense();
    const std::size_t n = d.size();
    std::vector<cplx> q(n > 1 ? n - 1 : 0);
    cplx acc{};
    for (std::size_t i = n; i-- > 0;) {
        acc = acc * root + d[i];
        if (i > 0) q[i - 1] = acc;
    }
    if (remainder) *remainder = acc;
    if (std::abs(root) > 1.0 && n > 1) {
        // Deflate from the constant term: Horner from the top amplifies errors by |root|.
        q[0] = -d[0] / root;
        for (std::size_t i = 1; i + 1 < n; ++i) q[i] = (q[i - 1] - d[i]) / root;
    }
    return from_dense(q, lo());
}

namespace dense {

std::vector<cplx> multiply(const std::vector<cplx>& p, const std::vector<cplx>& q) {
    if (p.empty() || q.empty()) return {};
    std::vector<cplx> r(p.size() + q.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

std::vector<cplx> from_roots(const std::vector<std::pair<cplx, int>>& roots) {
    std::vector<cplx> p{1.0};
    for (const auto& [r, m] : roots)
        for (int i = 0; i < m; ++i) p = multiply(p, {-r, 1.0});
    return p;
}

std::vector<cplx> taylor_shift(const std::vector<cplx>& p, cplx z0, int order) {
    // Repeated synthetic division: the remainders are the Taylor coefficients.
    std::vector<cplx> work = p;
    std::vector<cplx> out;
    for (int k = 0; k <= order; ++k) {
        if (work.empty()) {
            out.push_back({});
            continue;
        }
        cplx acc{};
        std::vector<cplx> q(work.size() - 1);
        for (std::size_t i = work.size(); i-- > 0;) {
            acc = acc * z0 + work[i];
            if (i > 0) q[i - 1] = acc;
        }
        out.push_back(acc);
        work = std::move(q);
    }
    return out;
}

cplx evaluate(const std::vector<cplx>& p, cplx z) {
    cplx acc{};
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

}  // namespace dense

}  // namespace pairedk
