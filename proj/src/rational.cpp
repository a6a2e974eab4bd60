#include "pairedk/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pairedk/error.hpp"

namespace pairedk {

namespace {

constexpr double kZeroPole = 1e-12;

bool same_point(cplx a, cplx b) {
    return std::abs(a - b) <= tolerances().eps_cluster * std::max(1.0, std::abs(a));
}

LaurentPoly poly_from_roots(const std::vector<std::pair<cplx, int>>& roots) {
    return LaurentPoly::from_dense(dense::from_roots(roots));
}

}  // namespace

Rational::Rational(cplx c) : num_(c), zeros_(std::vector<Root>{}) {}

Rational::Rational(LaurentPoly p) : num_(std::move(p)) {
    if (num_.lo() == num_.hi()) zeros_.emplace();
}

Rational Rational::from_parts(LaurentPoly num, std::vector<Root> poles, std::optional<std::vector<Root>> zeros) {
    Rational out;
    if (num.is_zero()) return out;

    // A pole at the origin is a negative exponent shift of the numerator.
    std::vector<Root> nonzero;
    for (const auto& p : poles) {
        if (p.multiplicity <= 0) continue;
        if (std::abs(p.value) <= kZeroPole)
            num = num.shifted(-p.multiplicity);
        else
            nonzero.push_back(p);
    }
    nonzero = cluster_roots(std::move(nonzero));

    if (zeros) {
        std::vector<Root> z;
        for (const auto& r : *zeros) {
            if (r.multiplicity <= 0) continue;
            if (std::abs(r.value) > kZeroPole) z.push_back(r);
        }
        zeros = cluster_roots(std::move(z));
    }

    const double eps_cancel = tolerances().eps_cancel;
    for (auto& p : nonzero) {
        while (p.multiplicity > 0) {
            bool matched = false;
            if (zeros) {
                for (auto& z : *zeros)
                    if (z.multiplicity > 0 && same_point(z.value, p.value)) {
                        --z.multiplicity;
                        matched = true;
                        break;
                    }
            }
            if (!matched) {
                const double value = std::abs(num(p.value));
                const double scale = num.magnitude_at(p.value);
                if (!(value <= eps_cancel * scale)) break;
                zeros.reset();  // the cancelled zero was not in the stored set
            }
            num = num.divided_by_linear(p.value);
            --p.multiplicity;
            if (num.is_zero()) return out;
        }
    }
    std::erase_if(nonzero, [](const Root& r) { return r.multiplicity <= 0; });
    if (zeros) std::erase_if(*zeros, [](const Root& r) { return r.multiplicity <= 0; });

    out.num_ = std::move(num);
    out.poles_ = std::move(nonzero);
    out.zeros_ = std::move(zeros);
    return out;
}

Rational Rational::from_zpk(const Zpk& zpk) {
    if (zpk.gain == cplx{}) return {};
    int zpow = zpk.zpow;
    std::vector<std::pair<cplx, int>> roots;
    std::vector<Root> zeros;
    for (const auto& z : zpk.zeros) {
        if (z.multiplicity <= 0) throw Error(ErrorCode::MalformedSymbol, "zero multiplicity must be positive");
        if (std::abs(z.value) <= kZeroPole) {
            zpow += z.multiplicity;
            continue;
        }
        roots.emplace_back(z.value, z.multiplicity);
        zeros.push_back(z);
    }
    for (const auto& p : zpk.poles)
        if (p.multiplicity <= 0) throw Error(ErrorCode::MalformedSymbol, "pole multiplicity must be positive");
    LaurentPoly num = zpk.gain * poly_from_roots(roots).shifted(zpow);
    return from_parts(std::move(num), zpk.poles, std::move(zeros));
}

Rational Rational::ratio(const LaurentPoly& num, const LaurentPoly& den) {
    if (den.is_zero()) throw Error(ErrorCode::ZeroDenominator, "denominator is identically zero");
    if (num.is_zero()) return {};
    const Zpk d = Rational(den).zpk();
    // num / (gain z^zpow prod (z - p)) with the denominator roots as poles.
    LaurentPoly n = (1.0 / d.gain) * num.shifted(-d.zpow);
    return from_parts(std::move(n), d.zeros);
}

Zpk Rational::zpk() const {
    Zpk out;
    if (num_.is_zero()) {
        out.gain = 0.0;
        return out;
    }
    out.gain = num_.coeff(num_.hi());
    out.zpow = num_.lo();
    if (zeros_)
        out.zeros = *zeros_;
    else if (num_.hi() > num_.lo())
        out.zeros = poly_roots(num_).roots;
    out.poles = poles_;
    return out;
}

std::vector<cplx> Rational::denominator() const {
    std::vector<std::pair<cplx, int>> r;
    for (const auto& p : poles_) r.emplace_back(p.value, p.multiplicity);
    return dense::from_roots(r);
}

int Rational::pole_degree() const {
    int d = 0;
    for (const auto& p : poles_) d += p.multiplicity;
    return d;
}

bool Rational::is_constant() const {
    return poles_.empty() && (num_.is_zero() || (num_.lo() == 0 && num_.hi() == 0));
}

bool Rational::has_pole(Location loc) const {
    for (const auto& p : poles_)
        if (p.loc == loc) return true;
    return loc == Location::Inside && num_.lo() < 0;
}

cplx Rational::operator()(cplx z) const {
    cplx v = num_(z);
    for (const auto& p : poles_) v /= std::pow(z - p.value, p.multiplicity);
    return v;
}

Rational Rational::circle_conjugate() const {
    if (num_.is_zero()) return {};
    // 1/(z - p)^m on the circle conjugates to z^m / ((-conj p)^m (z - 1/conj p)^m).
    LaurentPoly num = num_.circle_conjugate();
    cplx factor = 1.0;
    int shift = 0;
    std::vector<Root> poles;
    for (const auto& p : poles_) {
        const cplx pc = std::conj(p.value);
        factor /= std::pow(-pc, p.multiplicity);
        shift += p.multiplicity;
        poles.push_back({1.0 / pc, p.multiplicity, reflect(p.loc)});
    }
    num = factor * num.shifted(shift);
    std::optional<std::vector<Root>> zeros;
    if (zeros_) {
        zeros.emplace();
        for (const auto& z : *zeros_) zeros->push_back({1.0 / std::conj(z.value), z.multiplicity, reflect(z.loc)});
    }
    return from_parts(std::move(num), std::move(poles), std::move(zeros));
}

Rational Rational::reciprocal() const {
    if (num_.is_zero()) throw Error(ErrorCode::ZeroFunction, "reciprocal of the zero function");
    const Zpk z = zpk();
    std::vector<std::pair<cplx, int>> r;
    for (const auto& p : poles_) r.emplace_back(p.value, p.multiplicity);
    LaurentPoly num = (1.0 / z.gain) * poly_from_roots(r).shifted(-z.zpow);
    return from_parts(std::move(num), z.zeros, poles_);
}

Rational Rational::shifted(int k) const {
    Rational out = *this;
    out.num_ = num_.shifted(k);
    return out;
}

Rational operator+(const Rational& f, const Rational& g) {
    if (f.is_zero()) return g;
    if (g.is_zero()) return f;

    struct Slot {
        Root root;
        int mf = 0;
        int mg = 0;
    };
    std::vector<Slot> slots;
    for (const auto& p : f.poles_) slots.push_back({p, p.multiplicity, 0});
    for (const auto& p : g.poles_) {
        auto it = std::find_if(slots.begin(), slots.end(),
                               [&](const Slot& s) { return same_point(s.root.value, p.value); });
        if (it != slots.end())
            it->mg = p.multiplicity;
        else
            slots.push_back({p, 0, p.multiplicity});
    }
    std::vector<std::pair<cplx, int>> extra_f;
    std::vector<std::pair<cplx, int>> extra_g;
    std::vector<Root> poles;
    for (const auto& s : slots) {
        const int m = std::max(s.mf, s.mg);
        if (m > s.mf) extra_f.emplace_back(s.root.value, m - s.mf);
        if (m > s.mg) extra_g.emplace_back(s.root.value, m - s.mg);
        poles.push_back({s.root.value, m, s.root.loc});
    }
    LaurentPoly num = f.num_ * poly_from_roots(extra_f) + g.num_ * poly_from_roots(extra_g);
    return Rational::from_parts(std::move(num), std::move(poles));
}

Rational Rational::operator-() const {
    Rational out = *this;
    out.num_ = -num_;
    return out;
}

Rational operator-(const Rational& f, const Rational& g) { return f + (-g); }

Rational operator*(const Rational& f, const Rational& g) {
    if (f.is_zero() || g.is_zero()) return {};
    std::vector<Root> poles = f.poles_;
    poles.insert(poles.end(), g.poles_.begin(), g.poles_.end());
    std::optional<std::vector<Root>> zeros;
    if (f.zeros_ && g.zeros_) {
        zeros = *f.zeros_;
        zeros->insert(zeros->end(), g.zeros_->begin(), g.zeros_->end());
    } else if (f.zeros_ && g.num_.lo() == g.num_.hi()) {
        zeros = *f.zeros_;
    } else if (g.zeros_ && f.num_.lo() == f.num_.hi()) {
        zeros = *g.zeros_;
    }
    return Rational::from_parts(f.num_ * g.num_, std::move(poles), std::move(zeros));
}

Rational operator/(const Rational& f, const Rational& g) { return f * g.reciprocal(); }

std::vector<cplx> circle_probes(int n) {
    constexpr double offset = 0.3183098861837907;
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / n + offset));
    return out;
}

int probe_count(const Rational& f) {
    const int span = f.num().hi() - f.num().lo();
    return std::max(16, 2 * (span + f.pole_degree()) + 2);
}

double probe_max(const Rational& f, int n) {
    double m = 0.0;
    for (cplx z : circle_probes(n)) m = std::max(m, std::abs(f(z)));
    return m;
}

bool approx_equal(const Rational& f, const Rational& g, double tol) {
    const int n = std::max(probe_count(f), probe_count(g));
    double diff = 0.0;
    double scale = 0.0;
    for (cplx z : circle_probes(n)) {
        const cplx a = f(z);
        const cplx b = g(z);
        if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b))) return false;
        diff = std::max(diff, std::abs(a - b));
        scale = std::max({scale, std::abs(a), std::abs(b)});
    }
    return diff <= tol * scale;
}

bool approx_zero(const Rational& r, double reference, double tol) {
    if (r.is_zero()) return true;
    double m = 0.0;
    for (cplx z : circle_probes(probe_count(r))) {
        const double v = std::abs(r(z));
        if (!std::isfinite(v)) return false;
        m = std::max(m, v);
    }
    return m <= tol * reference;
}

double sup_norm(const Rational& f) {
    if (f.is_zero()) return 0.0;
    constexpr int samples = 2048;
    const double step = 2.0 * std::numbers::pi / samples;
    auto mag = [&](double t) { return std::abs(f(std::polar(1.0, t))); };
    std::vector<double> v(samples);
    for (int i = 0; i < samples; ++i) v[static_cast<std::size_t>(i)] = mag(i * step);
    double best = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(best)) return best;

    for (int i = 0; i < samples; ++i) {
        const double prev = v[static_cast<std::size_t>((i + samples - 1) % samples)];
        const double next = v[static_cast<std::size_t>((i + 1) % samples)];
        const double cur = v[static_cast<std::size_t>(i)];
        if (cur < prev || cur < next) continue;
        // Golden-section search on the bracket around a sampled local max.
        constexpr double phi = 0.6180339887498949;
        double lo = (i - 1) * step;
        double hi = (i + 1) * step;
        double x1 = hi - phi * (hi - lo);
        double x2 = lo + phi * (hi - lo);
        double f1 = mag(x1);
        double f2 = mag(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = mag(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = mag(x1);
            }
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

}  // namespace pairedk
