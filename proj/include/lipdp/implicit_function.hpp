#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "lipdp/errors.hpp"

namespace lipdp {

/// A residual map F : R^j x R^m -> R^j anchored at a root (v0, y0), with the
/// closed balls B1 (radius r1 around v0) and B2 (radius r2 around y0) on
/// which the quantitative radius conditions are checked.
struct ImplicitProblem {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> residual;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> jac_v;  // j x j
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> jac_y;  // j x m
    Eigen::VectorXd v0, y0;
    double r1 = 0.0, r2 = 0.0;
    /// Optional domain predicate; sampled points outside it raise
    /// DomainViolation.
    std::function<bool(const Eigen::VectorXd&, const Eigen::VectorXd&)> in_domain;
};

/// Frozen anchor operator T0 = (dF/dv(v0, y0))^{-1}. Validates that the
/// anchor is a root (|F| <= 1e-10) and that the jacobian clears the relative
/// determinant threshold.
Eigen::MatrixXd anchor_inverse(const ImplicitProblem& p);

/// Outcome of the two radius inequalities, with the achieved suprema so
/// callers can demand margin. Tight cases (margin == 0) fail.
struct RadiiReport {
    double residual_sup = 0.0;       // sup over B2 of |F(v0, y)|
    double residual_bound = 0.0;     // r1 / (2 ||T0||)
    double contraction_sup = 0.0;    // sup over B1 x B2 of ||I - T0 dF/dv||
    double contraction_bound = 0.5;
    bool ok = false;

    double residual_margin() const { return residual_bound - residual_sup; }
    double contraction_margin() const { return contraction_bound - contraction_sup; }
};

/// Checks the radius conditions by maximizing over deterministic
/// low-discrepancy samples of the balls (centers, axis extremes, Halton fill).
RadiiReport verify_radii(const ImplicitProblem& p, int n_samples = 4096);

/// Picard iteration v <- v - T0 F(v, y) from v0 with the anchor-frozen
/// operator; under the radius conditions it is a 1/2-contraction into B1.
/// Stops at residual <= tol. Throws NoConvergence after max_iter steps and
/// LeftBall if an iterate exits B1. If `residual_trace` is given, |F| is
/// recorded at every iterate. `start` overrides the initial point (must lie
/// in B1).
Eigen::VectorXd solve_implicit(const ImplicitProblem& p, const Eigen::VectorXd& y,
                               double tol = 1e-12, int max_iter = 200,
                               std::vector<double>* residual_trace = nullptr,
                               const Eigen::VectorXd* start = nullptr);

/// Jacobian of the implicit map: -(dF/dv)^{-1} dF/dy at (v, y).
Eigen::MatrixXd implicit_jacobian(const ImplicitProblem& p, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& v);

/// Copies u and overwrites the coordinates listed in idx (0-based, strictly
/// increasing) with v. With idx covering every coordinate the result is v.
Eigen::VectorXd embed_subvector(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                const std::vector<int>& idx);

/// Deterministic samples of the closed ball: center, axis extremes, then a
/// Halton fill (rejection from the enclosing cube). Size >= n.
std::vector<Eigen::VectorXd> ball_samples(const Eigen::VectorXd& center, double radius,
                                          int n);

}  // namespace lipdp
