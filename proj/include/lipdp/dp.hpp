#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "lipdp/constraint_system.hpp"
#include "lipdp/control_manifold.hpp"
#include "lipdp/state_space.hpp"
#include "lipdp/value_function.hpp"

namespace lipdp {

/// Finite discrete disturbance law; atoms are matrix columns.
struct DisturbanceLaw {
    Eigen::MatrixXd support;   // q x n_atoms
    Eigen::VectorXd weights;
};

/// Checks non-emptiness, nonnegative weights summing to 1 within 1e-12.
void validate_law(const DisturbanceLaw& law);

/// Sum of weights * f(atom).
double expectation(const DisturbanceLaw& law,
                   const std::function<double(const Eigen::VectorXd&)>& f);

/// One stage of the controlled system: state region, control manifold,
/// constraints, dynamics, disturbance law, and the per-disturbance Lipschitz
/// factor of the dynamics.
struct StageModel {
    StateSpace state_space;
    ControlManifold manifold;
    ConstraintSystem constraints;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::Vector2d&,
                                  const Eigen::VectorXd&)>
        dynamics;
    DisturbanceLaw law;
    std::function<double(const Eigen::VectorXd&)> dynamics_lip;  // V_k(y)
};

struct DpSolution {
    std::vector<ValueFunction> values;                   // J_0 .. J_N
    std::vector<std::vector<Eigen::Vector2d>> policies;  // per stage, per node
};

/// Backward induction over grid states: J_N = terminal_value on the terminal
/// lattice, and J_k(x) maximizes the expected interpolated J_{k+1} over the
/// sampled admissible controls. Ties break toward the lexicographically
/// smallest control. Throws EmptyAdmissible (with stage and node context) and
/// OutOfRegion if dynamics leave the next region by more than 1e-9 from an
/// in-region node.
DpSolution backward_induct(const std::vector<StageModel>& stages,
                           const StateSpace& terminal_space,
                           const std::function<double(const Eigen::VectorXd&)>& terminal_value,
                           double h_x, const std::vector<double>& h_u, int threads = 1);

DpSolution backward_induct(const std::vector<StageModel>& stages,
                           const StateSpace& terminal_space,
                           const std::function<double(const Eigen::VectorXd&)>& terminal_value,
                           double h_x, double h_u, int threads = 1);

/// Per-stage regularity constant feeding the certificate chain, with its
/// provenance (closed-form instance constant or sampled estimate).
struct TauInput {
    double value = 0.0;
    bool empirical = false;
};

struct StageCertificate {
    double con_constant = 1.0;      // a_k
    double tau = 0.0;               // tau_k
    bool tau_empirical = false;
    double lip_manifold = 1.0;      // Lip_{M_k}
    double expected_factor = 0.0;   // E_k[V_k]
    double bound = 0.0;             // L_k
    double empirical = 0.0;         // grid Lipschitz estimate of J_k
    double slack = 0.0;
    bool pass = false;
};

struct LipschitzCertificate {
    std::vector<StageCertificate> stages;  // k = 0 .. N-1
    double terminal_bound = 0.0;           // L_N = Lip(g)
    double terminal_empirical = 0.0;
    bool terminal_pass = false;

    bool all_pass() const;
};

/// Builds the bound chain L_N = terminal_lip,
/// L_k = L_{k+1} * E_k[V_k] * (1 + a_k tau_k Lip_{M_k}), measures the grid
/// Lipschitz estimate of every J_k, and compares with the slack
/// slack_k = slack_factor * L_k * h_u / (minimum grid spacing) that accounts
/// for control-sampling error.
LipschitzCertificate certify(const std::vector<StageModel>& stages,
                             const DpSolution& solution, double terminal_lip,
                             const std::vector<TauInput>& taus, double slack_factor,
                             const std::vector<double>& h_u, std::uint64_t seed);

}  // namespace lipdp
