#include "pairedk/svd.hpp"

#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "pairedk/error.hpp"

namespace pairedk {

namespace {

void check(lapack_int info) {
    if (info != 0) throw Error(ErrorCode::Indeterminate, "zgesdd failed with info " + std::to_string(info));
}

}  // namespace

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return {};
    Eigen::MatrixXcd a = m;
    Eigen::VectorXd s(std::min(a.rows(), a.cols()));
    const lapack_int rows = static_cast<lapack_int>(a.rows()), cols = static_cast<lapack_int>(a.cols());
    check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows, s.data(), nullptr, 1, nullptr, 1));
    return s;
}

RightSvd right_svd(const Eigen::MatrixXcd& m) {
    RightSvd out;
    if (m.size() == 0) {
        out.v = Eigen::MatrixXcd::Identity(m.cols(), m.cols());
        return out;
    }
    Eigen::MatrixXcd a = m;
    const lapack_int rows = static_cast<lapack_int>(a.rows()), cols = static_cast<lapack_int>(a.cols());
    out.s.resize(std::min(rows, cols));
    Eigen::MatrixXcd u(rows, rows), vt(cols, cols);
    check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', rows, cols, a.data(), rows, out.s.data(), u.data(), rows, vt.data(), cols));
    out.v = vt.adjoint();
    return out;
}

}  // namespace pairedk
