#pragma once

#include <Eigen/Dense>

namespace pairedk {

/// Singular values in decreasing order (LAPACK zgesdd).
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m);

struct RightSvd {
    Eigen::VectorXd s;
    Eigen::MatrixXcd v;  // full n x n right singular basis, columns ordered like s
};

RightSvd right_svd(const Eigen::MatrixXcd& m);

}  // namespace pairedk
