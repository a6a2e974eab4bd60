#pragma once

// Independent numerical references used to freeze expected values.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// Trapezoid rule on M equispaced circle points: spectrally accurate for
// functions analytic in an annulus around the circle.
inline cplx fourier(const std::function<cplx(cplx)>& f, int k, int M = 8192) {
    cplx s{};
    for (int j = 0; j < M; ++j) {
        const double t = 2.0 * std::numbers::pi * j / M;
        s += f(std::polar(1.0, t)) * std::polar(1.0, -k * t);
    }
    return s / static_cast<double>(M);
}

inline cplx inner(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& g, int M = 8192) {
    cplx s{};
    for (int j = 0; j < M; ++j) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * j / M);
        s += f(z) * std::conj(g(z));
    }
    return s / static_cast<double>(M);
}

inline double sup(const std::function<cplx(cplx)>& f, int M = 1 << 16) {
    double m = 0.0;
    for (int j = 0; j < M; ++j) m = std::max(m, std::abs(f(std::polar(1.0, 2.0 * std::numbers::pi * j / M))));
    return m;
}

}  // namespace oracle
