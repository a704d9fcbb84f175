#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "lipdp/control_manifold.hpp"
#include "lipdp/errors.hpp"
#include "lipdp/finite_set.hpp"
#include "lipdp/rng.hpp"
#include "lipdp/state_space.hpp"

namespace lipdp {

/// Absolute feasibility tolerance for c(u,x) <= 0. Constraints in scope are
/// polynomial with O(1) coefficients.
constexpr double kFeasTol = 1e-12;

/// Vector constraint map c(u, x) over a control manifold; the admissible set
/// is U(x) = {u on M : c(u, x) <= 0}. Differentials may be supplied
/// analytically; otherwise central finite differences are used.
struct ConstraintSystem {
    int num_constraints = 1;  // j, must be <= chart dimension for regularity ops
    int state_dim = 2;        // m

    std::function<Eigen::VectorXd(const Eigen::Vector2d&, const Eigen::VectorXd&)> value;
    /// Optional scalar fast path when num_constraints == 1.
    std::function<double(const Eigen::Vector2d&, const Eigen::VectorXd&)> scalar_value;
    /// Ambient control differential, j x 2. Optional.
    std::function<Eigen::MatrixXd(const Eigen::Vector2d&, const Eigen::VectorXd&)> control_jacobian;
    /// State differential, j x m. Optional.
    std::function<Eigen::MatrixXd(const Eigen::Vector2d&, const Eigen::VectorXd&)> state_jacobian;
    /// Degenerate controls beyond the manifold's nonregular points. Optional.
    std::function<bool(const Eigen::Vector2d&)> extra_degenerate;
};

Eigen::VectorXd constraint_value(const ConstraintSystem& cs, const Eigen::Vector2d& u,
                                 const Eigen::VectorXd& x);
bool is_feasible(const ConstraintSystem& cs, const Eigen::Vector2d& u,
                 const Eigen::VectorXd& x, double tol = kFeasTol);

/// Analytic jacobian if supplied, else central differences (relative step 1e-6).
Eigen::MatrixXd control_jacobian(const ConstraintSystem& cs, const Eigen::Vector2d& u,
                                 const Eigen::VectorXd& x);
Eigen::MatrixXd state_jacobian(const ConstraintSystem& cs, const Eigen::Vector2d& u,
                               const Eigen::VectorXd& x);

/// Differential of c(., x) in the chart coordinates at u: j x d (d = 1 here).
Eigen::MatrixXd chart_differential(const ConstraintSystem& cs, const Chart& chart,
                                   const Eigen::Vector2d& u, const Eigen::VectorXd& x);

/// Membership in the degenerate set D(M, X, c): nonregular manifold points
/// plus any instance-declared extra degeneracies.
bool is_degenerate(const ConstraintSystem& cs, const ControlManifold& m,
                   const Eigen::Vector2d& u, double tol = ControlManifold::kOnManifoldTol);

/// All strictly increasing multi-indices of length j with values in [0, d).
std::vector<std::vector<int>> increasing_multi_indices(int d, int j);

/// Sampled admissible control set at state x.
struct AdmissibleSample {
    Eigen::VectorXd state;
    FiniteSet controls;
    double mesh;
};

/// Filters the manifold sampling by feasibility. Throws EmptyAdmissible when
/// nothing survives (U(x) empty or mesh too coarse).
AdmissibleSample admissible_set(const ConstraintSystem& cs, const ControlManifold& m,
                                const Eigen::VectorXd& x, double h);

/// admissible_set with the documented recovery: halve the mesh up to
/// `max_halvings` times before giving up.
AdmissibleSample admissible_set_refining(const ConstraintSystem& cs,
                                         const ControlManifold& m,
                                         const Eigen::VectorXd& x, double h,
                                         int max_halvings = 6);

/// Sampled sup over feasible nondegenerate (u, x) of
/// max over invertible coordinate selections pi of
/// ||(d_u c(., x) o T^u_pi)^{-1} o d_x c(u, .)||.
/// A lower bound of the true sup, converging as the meshes shrink.
/// Throws NoInvertibleProjection (with the witness point) if some sampled
/// feasible nondegenerate control admits no invertible selection.
double tau_estimate(const ConstraintSystem& cs, const ControlManifold& m,
                    const StateSpace& region, double h_x, double h_u);

/// Sampled (lambda, mu): lambda bounds the inverse chart differentials, mu
/// bounds ||d_y c(u, .)|| for y within radius r of the sampled states.
/// tau = lambda * mu then dominates tau_estimate on the same samples.
std::pair<double, double> lambda_mu_bounds(const ConstraintSystem& cs,
                                           const ControlManifold& m,
                                           const StateSpace& region, double h_x,
                                           double h_u, double r);

/// Sample-scale adherence check: every sampled feasible control within h of
/// the degenerate set must have a feasible nondegenerate neighbor within
/// sigma. sigma_achieved is the smallest radius in the descending ladder
/// sigma, sigma/2, ... (8 levels) at which the check still passes.
struct AdherenceCheck {
    bool ok = true;
    std::optional<Eigen::Vector2d> failing;
    double sigma = 0.0;
    double sigma_achieved = 0.0;
};
AdherenceCheck check_adherence(const ConstraintSystem& cs, const ControlManifold& m,
                               const Eigen::VectorXd& x, double sigma, double h);

/// Empirical Hausdorff regularity of x -> U(x) over random grid-state pairs.
struct ProbePair {
    double state_distance;
    double hausdorff;
    double bound;  // theoretical * distance + slack
};
struct ProbeReport {
    std::vector<ProbePair> pairs;
    double modulus = 0.0;            // max d_H / |x - x'|
    double theoretical_bound = 0.0;  // a(X) * tau * Lip_M
    double slack = 0.0;              // sampling allowance, 2 * control spacing
    bool within_bound = true;
};
ProbeReport multifunction_lipschitz_probe(const ConstraintSystem& cs,
                                          const ControlManifold& m,
                                          const StateSpace& region, double h_x,
                                          double h_u, int n_pairs, double tau,
                                          SplitMix64& rng);

}  // namespace lipdp
