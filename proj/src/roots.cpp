#include "pairedk/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "pairedk/error.hpp"

namespace pairedk {

std::string_view to_string(Location loc) {
    switch (loc) {
        case Location::Inside: return "in";
        case Location::On: return "on";
        case Location::Outside: return "out";
    }
    return "?";
}

Location location_from_string(std::string_view s) {
    if (s == "in") return Location::Inside;
    if (s == "on") return Location::On;
    if (s == "out") return Location::Outside;
    throw Error(ErrorCode::MalformedSymbol, "location tag must be in|on|out, got '" + std::string(s) + "'");
}

Location reflect(Location loc) {
    switch (loc) {
        case Location::Inside: return Location::Outside;
        case Location::Outside: return Location::Inside;
        case Location::On: return Location::On;
    }
    return loc;
}

Location classify(cplx v) {
    const double r = std::abs(v);
    if (std::abs(r - 1.0) <= tolerances().eps_circle) return Location::On;
    return r < 1.0 ? Location::Inside : Location::Outside;
}

int RootSet::degree() const {
    int d = 0;
    for (const auto& r : roots) d += r.multiplicity;
    return d;
}

int RootSet::count(Location loc) const {
    int d = 0;
    for (const auto& r : roots)
        if (r.loc == loc) d += r.multiplicity;
    return d;
}

std::vector<Root> cluster_roots(std::vector<Root> roots) {
    const double eps = tolerances().eps_cluster;
    const std::size_t n = roots.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double scale = std::max(1.0, std::abs(roots[i].value));
            if (std::abs(roots[i].value - roots[j].value) <= eps * scale) parent[find(j)] = find(i);
        }

    std::vector<Root> out;
    std::vector<std::size_t> slot(n, n);
    std::vector<cplx> sum;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (slot[r] == n) {
            slot[r] = out.size();
            out.push_back({cplx{}, 0, roots[i].loc});
            sum.push_back({});
        }
        Root& c = out[slot[r]];
        sum[slot[r]] += static_cast<double>(roots[i].multiplicity) * roots[i].value;
        c.multiplicity += roots[i].multiplicity;
        // An explicit "on" tag in any member wins; it is the user's statement.
        if (roots[i].loc == Location::On) c.loc = Location::On;
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k].value = sum[k] / static_cast<double>(out[k].multiplicity);
    std::stable_sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

RootSet poly_roots(const LaurentPoly& p) {
    if (p.is_zero()) throw Error(ErrorCode::ZeroFunction, "poly_roots of the zero polynomial");
    const auto c = p.dense();
    const int degree = static_cast<int>(c.size()) - 1;
    if (degree > 64) throw Error(ErrorCode::DegreeOverflow, "degree " + std::to_string(degree) + " exceeds 64");

    RootSet out;
    if (degree == 0) return out;

    std::vector<cplx> raw;
    if (degree == 1) {
        raw.push_back(-c[0] / c[1]);
    } else {
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
        for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[static_cast<std::size_t>(i)] / c.back();
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
        for (int i = 0; i < degree; ++i) raw.push_back(solver.eigenvalues()(i));
    }

    std::vector<Root> roots;
    for (cplx r : raw) roots.push_back({r, 1, Location::Inside});
    roots = cluster_roots(std::move(roots));

    const auto dp = LaurentPoly::from_dense(c).derivative().dense();
    const double norm = p.l1_norm();
    for (auto& r : roots) {
        if (r.multiplicity == 1) {
            // One Newton step, kept only when it does not increase the residual.
            const cplx f = dense::evaluate(c, r.value);
            const cplx df = dp.empty() ? cplx{} : dense::evaluate(dp, r.value);
            if (df != cplx{}) {
                const cplx cand = r.value - f / df;
                if (std::abs(dense::evaluate(c, cand)) <= std::abs(f)) r.value = cand;
            }
            const double scale = norm * std::max(1.0, std::pow(std::abs(r.value), degree));
            out.max_residual = std::max(out.max_residual, std::abs(dense::evaluate(c, r.value)) / scale);
        }
        r.loc = classify(r.value);
    }
    out.roots = std::move(roots);
    return out;
}

}  // namespace pairedk
