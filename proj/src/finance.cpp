#include "lipdp/finance.hpp"

#include <algorithm>
#include <cmath>

namespace lipdp {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw InvalidInput(message);
}

void validate_yield_law(const DisturbanceLaw& law, int stage) {
    validate_law(law);
    if (law.support.rows() != 2)
        throw InvalidInput("yield_laws: atoms must be (y_s, y_b) pairs, stage " +
                           std::to_string(stage));
    if (!(law.support.array() > 0.0).all())
        throw InvalidInput("yield_laws: yields must be strictly positive, stage " +
                           std::to_string(stage));
}

}  // namespace

void validate(const MarketModel& m) {
    require(m.horizon >= 1, "horizon: must be at least 1");
    require(m.cost_stock > 0.0 && m.cost_stock < 1.0, "cost_stock: must lie in (0, 1)");
    require(m.cost_bond > 0.0 && m.cost_bond < 1.0, "cost_bond: must lie in (0, 1)");
    require(m.riskless_floor > 0.0 && m.riskless_floor < 1.0,
            "riskless_floor: must lie in (0, 1)");
    require(m.state_floor0 > 0.0, "state_floor0: must be positive");
    require(m.wealth_cap0 > 2.0 * m.state_floor0,
            "wealth_cap0: must exceed twice state_floor0");
    require(static_cast<int>(m.yield_laws.size()) == m.horizon,
            "yield_laws: one law per stage required");
    for (int k = 0; k < m.horizon; ++k) validate_yield_law(m.yield_laws[static_cast<std::size_t>(k)], k);
    require(m.initial_stock >= m.state_floor0 && m.initial_bond >= m.state_floor0 &&
                m.initial_stock + m.initial_bond <= m.wealth_cap0,
            "initial allocation: (initial_stock, initial_bond) must lie in the initial region");
}

MarketModel desk_instance() {
    MarketModel m;
    DisturbanceLaw law;
    law.support.resize(2, 2);
    law.support << 1.1, 0.9, 1.02, 1.02;
    law.weights.resize(2);
    law.weights << 0.5, 0.5;
    m.yield_laws.assign(static_cast<std::size_t>(m.horizon), law);
    return m;
}

double q_coefficient(double riskless_floor, const DisturbanceLaw& law) {
    require(riskless_floor > 0.0 && riskless_floor < 1.0,
            "riskless_floor: must lie in (0, 1)");
    double ratio = 1.0;
    for (Eigen::Index a = 0; a < law.support.cols(); ++a)
        ratio = std::min(ratio, law.support(1, a) / law.support(0, a));
    return (1.0 - riskless_floor) / riskless_floor * ratio;
}

double delta_coefficient(double q, double cost_bond) {
    require(q > 0.0, "q: must be positive");
    return 1.0 / (q * (1.0 - cost_bond) + 1.0);
}

std::tuple<double, double, double> lipschitz_constants(StageConstants& sc,
                                                       double cost_stock,
                                                       double cost_bond) {
    // Inverse chart differentials: 1/(S(1+q(1-cost_bond))) = delta/S on the
    // horizontal edges, 1/(B(1-cost_stock+q)) on the vertical ones. Both
    // families carry feasible controls, so the bound takes the larger branch.
    const double horizontal = sc.delta / sc.state_floor;
    const double vertical = 1.0 / (sc.state_floor * (1.0 - cost_stock + sc.q));
    sc.lambda = std::max(horizontal, vertical);

    // State gradient: dc/dS in [0, 1]; dc/dB in [-q, -q + delta(q+1-cost_stock)].
    const double b_extreme =
        std::max(sc.q, std::abs(sc.delta * (sc.q + 1.0 - cost_stock) - sc.q));
    sc.mu = std::sqrt(1.0 + b_extreme * b_extreme);

    // Row-wise bound on the dynamics Jacobian; the sqrt(2) joins the two rows.
    const double row = 1.0 + sc.wealth_cap * sc.wealth_cap +
                       (1.0 - std::min(cost_stock, cost_bond)) *
                           (1.0 - std::min(cost_stock, cost_bond));
    sc.dynamics_factor = std::sqrt(2.0 * row);
    return {sc.lambda, sc.mu, sc.dynamics_factor};
}

FinanceConstants state_space_recursion(const MarketModel& m) {
    validate(m);
    FinanceConstants out;
    out.stages.reserve(static_cast<std::size_t>(m.horizon));
    double floor_k = m.state_floor0;
    double cap_k = m.wealth_cap0;
    for (int k = 0; k < m.horizon; ++k) {
        const DisturbanceLaw& law = m.yield_laws[static_cast<std::size_t>(k)];
        StageConstants sc;
        sc.q = q_coefficient(m.riskless_floor, law);
        sc.delta = delta_coefficient(sc.q, m.cost_bond);
        sc.state_floor = floor_k;
        sc.wealth_cap = cap_k;
        sc.yield_min = law.support.minCoeff();
        sc.yield_max = law.support.maxCoeff();
        lipschitz_constants(sc, m.cost_stock, m.cost_bond);
        out.stages.push_back(sc);
        floor_k *= (1.0 - sc.delta) * sc.yield_min;
        cap_k *= sc.yield_max;
    }
    out.terminal_floor = floor_k;
    out.terminal_cap = cap_k;
    return out;
}

Eigen::Vector2d wealth_dynamics(const Eigen::Vector2d& state,
                                const Eigen::Vector2d& control,
                                const Eigen::Vector2d& yields, double cost_stock,
                                double cost_bond) {
    const double s = state[0], b = state[1], u = control[0], v = control[1];
    return {(s * (1.0 - u) + b * v * (1.0 - cost_stock)) * yields[0],
            (b * (1.0 - v) + s * u * (1.0 - cost_bond)) * yields[1]};
}

double regulatory_constraint(const Eigen::Vector2d& control,
                             const Eigen::Vector2d& state, double q,
                             double cost_stock, double cost_bond) {
    const double s = state[0], b = state[1], u = control[0], v = control[1];
    return s * (1.0 - u) + v * b * (1.0 - cost_stock) -
           q * (b * (1.0 - v) + u * s * (1.0 - cost_bond));
}

std::function<double(const Eigen::VectorXd&)> make_utility(const UtilitySpec& u) {
    switch (u.kind) {
        case Utility::Linear:
            return [](const Eigen::VectorXd& x) { return x.sum(); };
        case Utility::Capped: {
            const double cap = u.cap;
            return [cap](const Eigen::VectorXd& x) { return std::min(x.sum(), cap); };
        }
        case Utility::Zero:
            return [](const Eigen::VectorXd&) { return 0.0; };
    }
    throw InvalidInput("utility: unknown kind");
}

double utility_lipschitz(const UtilitySpec& u) {
    return u.kind == Utility::Zero ? 0.0 : std::sqrt(2.0);
}

FinanceInstance build_stage_models(const MarketModel& m, const UtilitySpec& utility,
                                   ConstraintVariant variant) {
    const FinanceConstants constants = state_space_recursion(m);

    std::vector<StageModel> stages;
    stages.reserve(static_cast<std::size_t>(m.horizon));
    const double cs_ = m.cost_stock, cb = m.cost_bond;
    for (int k = 0; k < m.horizon; ++k) {
        const StageConstants& sc = constants.stages[static_cast<std::size_t>(k)];
        StageModel stage{
            StateSpace::wealth_region(sc.state_floor, sc.wealth_cap),
            ControlManifold::box({0.0, 0.0}, {sc.delta, sc.delta}),
            ConstraintSystem{},
            {},
            m.yield_laws[static_cast<std::size_t>(k)],
            {}};

        ConstraintSystem& con = stage.constraints;
        con.num_constraints = 1;
        con.state_dim = 2;
        const double q = sc.q;
        if (variant == ConstraintVariant::Regulatory) {
            con.scalar_value = [q, cs_, cb](const Eigen::Vector2d& u,
                                            const Eigen::VectorXd& x) {
                return regulatory_constraint(u, Eigen::Vector2d(x[0], x[1]), q, cs_, cb);
            };
            con.control_jacobian = [q, cs_, cb](const Eigen::Vector2d&,
                                                const Eigen::VectorXd& x) {
                Eigen::MatrixXd jac(1, 2);
                jac << -x[0] * (1.0 + q * (1.0 - cb)), x[1] * (1.0 - cs_ + q);
                return jac;
            };
            con.state_jacobian = [q, cs_, cb](const Eigen::Vector2d& u,
                                              const Eigen::VectorXd&) {
                Eigen::MatrixXd jac(1, 2);
                jac << (1.0 - u[0]) - q * u[0] * (1.0 - cb),
                    u[1] * (1.0 - cs_) - q * (1.0 - u[1]);
                return jac;
            };
        } else {
            const double cap = sc.delta;
            con.scalar_value = [cap](const Eigen::Vector2d& u, const Eigen::VectorXd&) {
                return u[0] + u[1] - cap;
            };
            con.control_jacobian = [](const Eigen::Vector2d&, const Eigen::VectorXd&) {
                Eigen::MatrixXd jac(1, 2);
                jac << 1.0, 1.0;
                return jac;
            };
            con.state_jacobian = [](const Eigen::Vector2d&, const Eigen::VectorXd&) {
                return Eigen::MatrixXd::Zero(1, 2).eval();
            };
        }
        con.value = [scalar = con.scalar_value](const Eigen::Vector2d& u,
                                                const Eigen::VectorXd& x) {
            Eigen::VectorXd v(1);
            v[0] = scalar(u, x);
            return v;
        };

        stage.dynamics = [cs_, cb](const Eigen::VectorXd& x, const Eigen::Vector2d& u,
                                   const Eigen::VectorXd& y) -> Eigen::VectorXd {
            return wealth_dynamics(Eigen::Vector2d(x[0], x[1]), u,
                                   Eigen::Vector2d(y[0], y[1]), cs_, cb);
        };
        const double factor = sc.dynamics_factor;
        stage.dynamics_lip = [factor](const Eigen::VectorXd& y) {
            return factor * y.maxCoeff();
        };
        stages.push_back(std::move(stage));
    }

    return FinanceInstance{
        std::move(stages),
        StateSpace::wealth_region(constants.terminal_floor, constants.terminal_cap),
        constants,
        make_utility(utility),
        utility_lipschitz(utility),
        variant};
}

}  // namespace lipdp
