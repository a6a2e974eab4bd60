#pragma once

#include <complex>

namespace pairedk {

using cplx = std::complex<double>;

/// Numeric thresholds shared by every module.
struct Tolerances {
    double eps_eq = 1e-11;       // relative tolerance for "exact" identities
    double eps_drop = 1e-13;     // coefficient pruning, relative to the largest coefficient
    double eps_circle = 1e-9;    // | |z| - 1 | below this puts a root on the circle
    double eps_cluster = 1e-7;   // roots closer than this are merged
    double eps_root = 1e-10;     // accepted root residual relative to the coefficient norm
    double eps_cancel = 1e-12;   // numerator value (relative) at which a pole is cancelled
    double rank_tol = 1e-10;     // singular values below rank_tol * sigma_max are dropped
    double min_gap = 1e3;        // spectral gap required for a certified rank
};

/// Process-wide defaults. Set once at startup (CLI config), read everywhere.
const Tolerances& tolerances();
void set_tolerances(const Tolerances& t);

}  // namespace pairedk
