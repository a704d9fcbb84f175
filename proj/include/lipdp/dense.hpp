#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace lipdp {

/// Operator 2-norm (largest singular value).
inline double operator_norm(const Eigen::MatrixXd& s) {
    if (s.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(s).singularValues()(0);
}

/// Norm of the inverse of a square matrix: 1 / sigma_min.
inline double inverse_operator_norm(const Eigen::MatrixXd& s) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
    return 1.0 / svd.singularValues()(svd.singularValues().size() - 1);
}

/// Relative invertibility test: |det| >= 1e-10 * scale where scale is the
/// largest absolute entry (1 if the matrix vanishes).
inline bool invertible_at_scale(const Eigen::MatrixXd& s) {
    double scale = s.cwiseAbs().maxCoeff();
    if (scale == 0.0) scale = 1.0;
    return std::abs(s.determinant()) >= 1e-10 * scale;
}

}  // namespace lipdp
