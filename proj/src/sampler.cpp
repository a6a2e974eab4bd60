#include <numbers>
#include <stdexcept>

#include "pairedk/properties.hpp"

namespace pairedk {

namespace {

class RootDrawer {
public:
    RootDrawer(const SamplerProfile& p, std::mt19937_64& rng) : p_(p), rng_(rng) {}

    cplx draw(Location loc) {
        const double lo = loc == Location::Inside ? p_.inside_lo : p_.outside_lo;
        const double hi = loc == Location::Inside ? p_.inside_hi : p_.outside_hi;
        cplx r;
        for (int attempt = 0; attempt < 200; ++attempt) {
            r = loc == Location::On ? std::polar(1.0, angle()) : std::polar(lo + (hi - lo) * unit(), angle());
            if (separated(r)) break;
        }
        placed_.push_back(r);
        return r;
    }

    void reserve(cplx r) { placed_.push_back(r); }
    bool separated(cplx r) const {
        for (const cplx q : placed_)
            if (std::abs(r - q) < p_.min_separation) return false;
        return true;
    }

    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    double angle() { return 2.0 * std::numbers::pi * unit(); }
    int count(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    Location side() { return unit() < 0.5 ? Location::Inside : Location::Outside; }

private:
    const SamplerProfile& p_;
    std::mt19937_64& rng_;
    std::vector<cplx> placed_;
};

Rational inner_symbol(const SamplerProfile& p, RootDrawer& d) {
    Zpk z{std::polar(1.0, d.angle()), d.count(0, p.max_zpow), {}, {}};
    const int n = d.count(0, p.degree_bound);
    for (int i = 0; i < n; ++i) {
        const cplx a = d.draw(Location::Inside);
        const cplx refl = 1.0 / std::conj(a);
        d.reserve(refl);
        z.zeros.push_back({a, 1, Location::Inside});
        z.poles.push_back({refl, 1, Location::Outside});
        z.gain *= -1.0 / std::conj(a);
    }
    if (n == 0 && z.zpow == 0) z.zpow = 1;
    return Rational::from_zpk(z);
}

bool satisfies(const Rational& f, ClassConstraint c) {
    switch (c) {
        case ClassConstraint::Hinf: return membership(f, SpaceTag::Hinf);
        case ClassConstraint::HinfBar: return membership(f, SpaceTag::HinfBar);
        case ClassConstraint::Inner: return membership(f, SpaceTag::InnerPlus);
        case ClassConstraint::Outer: return membership(f, SpaceTag::OuterPlus);
        case ClassConstraint::Invertible: return circle_regular(f);
        case ClassConstraint::None: return true;
    }
    return true;
}

}  // namespace

SamplerProfile oracle_friendly(SamplerProfile p) {
    p.inside_lo = 0.2;
    p.inside_hi = 0.6;
    p.outside_lo = 1.6;
    p.outside_hi = 5.0;
    return p;
}

Rational sample_symbol(const SamplerProfile& profile, std::mt19937_64& rng) {
    if (profile.constraint == ClassConstraint::HinfBar) {
        SamplerProfile p = profile;
        p.constraint = ClassConstraint::Hinf;
        return sample_symbol(p, rng).circle_conjugate();
    }
    RootDrawer d(profile, rng);
    Rational f;
    if (profile.constraint == ClassConstraint::Inner) {
        f = inner_symbol(profile, d);
    } else {
        const bool hinf = profile.constraint == ClassConstraint::Hinf;
        const bool outer = profile.constraint == ClassConstraint::Outer;
        Zpk z{std::polar(0.5 + 1.5 * d.unit(), d.angle()), 0, {}, {}};
        if (!outer) z.zpow = d.count(hinf ? 0 : -profile.max_zpow, profile.max_zpow);
        for (int i = d.count(0, profile.degree_bound); i > 0; --i) {
            const Location loc = outer ? Location::Outside : d.side();
            z.zeros.push_back({d.draw(loc), 1, loc});
        }
        const bool circle = profile.allow_circle_zeros && profile.constraint != ClassConstraint::Invertible;
        if (circle && d.unit() < 0.5) z.zeros.push_back({d.draw(Location::On), 1, Location::On});
        for (int i = d.count(0, profile.degree_bound); i > 0; --i) {
            const Location loc = hinf || outer ? Location::Outside : d.side();
            z.poles.push_back({d.draw(loc), 1, loc});
        }
        f = Rational::from_zpk(z);
    }
    if (!satisfies(f, profile.constraint)) throw std::logic_error("sampled symbol violates its class constraint");
    return f;
}

Rational sample_symbol(const SamplerProfile& profile, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_symbol(profile, rng);
}

}  // namespace pairedk
