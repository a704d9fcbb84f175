#pragma once

#include <Eigen/Core>
#include <vector>

#include "lipdp/dp.hpp"

namespace lipdp {

/// Two-asset allocation model with proportional transaction costs and a
/// regulatory floor on the post-trade riskless wealth fraction. Controls
/// (u, v) move fractions of stock wealth into bonds and vice versa.
struct MarketModel {
    int horizon = 3;
    double cost_stock = 0.05;     // charged on buying stock
    double cost_bond = 0.05;      // charged on buying bond
    double riskless_floor = 0.4;  // minimum riskless wealth fraction
    std::vector<DisturbanceLaw> yield_laws;  // per stage, atoms (y_s, y_b)
    double initial_stock = 0.8;
    double initial_bond = 1.0;
    double state_floor0 = 0.1;    // per-asset wealth floor of the initial region
    double wealth_cap0 = 2.0;     // total-wealth cap of the initial region
};

/// Throws InvalidInput naming the offending field.
void validate(const MarketModel& m);

/// Default desk instance: N = 3, both costs 0.05, floor 0.4, two-atom yield
/// law {(1.1,1.02): 0.5, (0.9,1.02): 0.5} every stage, region (0.1, 2.0),
/// initial allocation (0.8, 1.0).
MarketModel desk_instance();

/// Per-stage closed-form constants of the instance.
struct StageConstants {
    double q = 0.0;               // constraint coefficient
    double delta = 0.0;           // always-feasible trade fraction, control cap
    double state_floor = 0.0;     // per-asset wealth floor of X_k
    double wealth_cap = 0.0;      // total-wealth cap of X_k
    double yield_min = 0.0;       // min over the joint support of min(y_s, y_b)
    double yield_max = 0.0;       // max over the joint support of max(y_s, y_b)
    double lambda = 0.0;          // bound on inverse chart differentials
    double mu = 0.0;              // bound on the state gradient of c
    double dynamics_factor = 0.0; // V_k(y) = dynamics_factor * max(y_s, y_b)

    double tau() const { return lambda * mu; }
};

struct FinanceConstants {
    std::vector<StageConstants> stages;
    double terminal_floor = 0.0;
    double terminal_cap = 0.0;
};

double q_coefficient(double riskless_floor, const DisturbanceLaw& law);

/// Largest stock-to-bond fraction feasible at every positive state:
/// 1 / (q (1 - cost_bond) + 1), in (0, 1).
double delta_coefficient(double q, double cost_bond);

/// Chains the floors and caps forward: floor_{k+1} = floor_k (1 - delta_k)
/// * yield_min (minimum over the joint support, the conservative choice that
/// keeps the lower bound valid), cap_{k+1} = cap_k * yield_max. Fills the
/// closed-form regularity constants per stage.
FinanceConstants state_space_recursion(const MarketModel& m);

/// Post-trade wealth evolution.
Eigen::Vector2d wealth_dynamics(const Eigen::Vector2d& state,
                                const Eigen::Vector2d& control,
                                const Eigen::Vector2d& yields, double cost_stock,
                                double cost_bond);

/// Scalar regulatory constraint: feasible iff <= 0. Equivalent to requiring
/// the riskless fraction >= floor after the trade and after every support
/// yield next period.
double regulatory_constraint(const Eigen::Vector2d& control,
                             const Eigen::Vector2d& state, double q,
                             double cost_stock, double cost_bond);

/// Fills lambda, mu and the dynamics factor of sc; returns (lambda, mu,
/// dynamics_factor).
std::tuple<double, double, double> lipschitz_constants(StageConstants& sc,
                                                       double cost_stock,
                                                       double cost_bond);

enum class Utility { Linear, Capped, Zero };
struct UtilitySpec {
    Utility kind = Utility::Linear;
    double cap = 2.5;  // Capped only
};
std::function<double(const Eigen::VectorXd&)> make_utility(const UtilitySpec& u);
double utility_lipschitz(const UtilitySpec& u);

/// Regulatory is the full instance; StateFree swaps in the x-independent
/// constraint u + v <= delta_k (so the multifunction is constant in x and the
/// certificate chain collapses to the pure dynamics factors).
enum class ConstraintVariant { Regulatory, StateFree };

struct FinanceInstance {
    std::vector<StageModel> stages;
    StateSpace terminal_space;
    FinanceConstants constants;
    std::function<double(const Eigen::VectorXd&)> utility;
    double utility_lip = 0.0;
    ConstraintVariant variant = ConstraintVariant::Regulatory;
};

/// Assembles the stage models: wealth regions X_k, control boxes
/// [0, delta_k]^2 (as nested-boundary manifolds), the constraint with its
/// analytic differentials, the dynamics and the per-atom Lipschitz factor.
/// Vertices are always sampled, so (delta_k, 0) sits in every admissible
/// sample.
FinanceInstance build_stage_models(const MarketModel& m, const UtilitySpec& utility,
                                   ConstraintVariant variant = ConstraintVariant::Regulatory);

}  // namespace lipdp
