#include "lipdp/dp.hpp"

#include <cmath>
#include <sstream>

#include "lipdp/parallel.hpp"

namespace lipdp {

void validate_law(const DisturbanceLaw& law) {
    if (law.support.cols() == 0)
        throw InvalidInput("DisturbanceLaw: support must be non-empty");
    if (law.weights.size() != law.support.cols())
        throw InvalidInput("DisturbanceLaw: one weight per atom required");
    if ((law.weights.array() < 0).any())
        throw InvalidInput("DisturbanceLaw: weights must be nonnegative");
    if (std::abs(law.weights.sum() - 1.0) > 1e-12)
        throw InvalidInput("DisturbanceLaw: weights must sum to 1 within 1e-12");
}

double expectation(const DisturbanceLaw& law,
                   const std::function<double(const Eigen::VectorXd&)>& f) {
    double acc = 0.0;
    for (Eigen::Index a = 0; a < law.support.cols(); ++a)
        acc += law.weights[a] * f(law.support.col(a));
    return acc;
}

DpSolution backward_induct(const std::vector<StageModel>& stages,
                           const StateSpace& terminal_space,
                           const std::function<double(const Eigen::VectorXd&)>& terminal_value,
                           double h_x, const std::vector<double>& h_u, int threads) {
    const std::size_t horizon = stages.size();
    if (h_u.size() != horizon)
        throw InvalidInput("backward_induct: one control mesh per stage required");
    for (const auto& st : stages) validate_law(st.law);

    DpSolution sol;
    sol.values.reserve(horizon + 1);
    for (const auto& st : stages) sol.values.emplace_back(st.state_space, h_x);
    sol.values.emplace_back(terminal_space, h_x);
    sol.policies.resize(horizon);

    ValueFunction& terminal = sol.values[horizon];
    for (Eigen::Index flat = 0; flat < terminal.node_count(); ++flat)
        terminal.set_value(flat, terminal_value(terminal.node(flat)));

    for (std::size_t k = horizon; k-- > 0;) {
        const StageModel& st = stages[k];
        const auto controls = sample_manifold_points(st.manifold, h_u[k]);
        const ValueFunction& next = sol.values[k + 1];
        ValueFunction& cur = sol.values[k];
        auto& policy = sol.policies[k];
        policy.assign(static_cast<std::size_t>(cur.node_count()),
                      Eigen::Vector2d::Zero());
        const Eigen::Index n_atoms = st.law.support.cols();

        parallel_for(cur.node_count(), threads, [&](std::int64_t begin, std::int64_t end) {
            for (std::int64_t flat = begin; flat < end; ++flat) {
                const Eigen::VectorXd x = cur.node(flat);
                const bool in_region = cur.node_inside(flat);
                double best = 0.0;
                Eigen::Vector2d best_u = Eigen::Vector2d::Zero();
                bool any = false;
                for (const auto& u : controls) {
                    if (!is_feasible(st.constraints, u, x)) continue;
                    double val = 0.0;
                    for (Eigen::Index a = 0; a < n_atoms; ++a) {
                        const Eigen::VectorXd y = st.law.support.col(a);
                        const Eigen::VectorXd landed = st.dynamics(x, u, y);
                        if (in_region &&
                            (landed - next.region().project(landed)).norm() > 1e-9) {
                            std::ostringstream os;
                            os << "dynamics left the next state region at stage " << k
                               << ", node (" << x.transpose() << "), control (" << u[0]
                               << ", " << u[1] << ")";
                            throw OutOfRegion(os.str());
                        }
                        val += st.law.weights[a] * next(landed);
                    }
                    // Controls arrive lexicographically sorted; strict
                    // improvement keeps the lexicographically smallest argmax.
                    if (!any || val > best) {
                        best = val;
                        best_u = u;
                        any = true;
                    }
                }
                if (!any) {
                    std::ostringstream os;
                    os << "empty admissible sample at stage " << k << ", node ("
                       << x.transpose() << "), control mesh " << h_u[k];
                    throw EmptyAdmissible(os.str());
                }
                cur.set_value(flat, best);
                policy[static_cast<std::size_t>(flat)] = best_u;
            }
        });
    }
    return sol;
}

DpSolution backward_induct(const std::vector<StageModel>& stages,
                           const StateSpace& terminal_space,
                           const std::function<double(const Eigen::VectorXd&)>& terminal_value,
                           double h_x, double h_u, int threads) {
    return backward_induct(stages, terminal_space, terminal_value, h_x,
                           std::vector<double>(stages.size(), h_u), threads);
}

bool LipschitzCertificate::all_pass() const {
    if (!terminal_pass) return false;
    for (const auto& s : stages)
        if (!s.pass) return false;
    return true;
}

LipschitzCertificate certify(const std::vector<StageModel>& stages,
                             const DpSolution& solution, double terminal_lip,
                             const std::vector<TauInput>& taus, double slack_factor,
                             const std::vector<double>& h_u, std::uint64_t seed) {
    const std::size_t horizon = stages.size();
    if (taus.size() != horizon)
        throw InvalidInput("certify: one tau per stage required");
    if (h_u.size() != horizon)
        throw InvalidInput("certify: one control mesh per stage required");
    if (solution.values.size() != horizon + 1)
        throw InvalidInput("certify: solution does not match the stage list");

    LipschitzCertificate cert;
    cert.stages.resize(horizon);

    std::vector<double> bound(horizon + 1);
    bound[horizon] = terminal_lip;
    for (std::size_t k = horizon; k-- > 0;) {
        StageCertificate& sc = cert.stages[k];
        sc.con_constant = stages[k].state_space.con_constant();
        sc.tau = taus[k].value;
        sc.tau_empirical = taus[k].empirical;
        sc.lip_manifold = stages[k].manifold.lip_bound();
        sc.expected_factor = expectation(stages[k].law, stages[k].dynamics_lip);
        bound[k] = bound[k + 1] * sc.expected_factor *
                   (1.0 + sc.con_constant * sc.tau * sc.lip_manifold);
        sc.bound = bound[k];
    }
    for (std::size_t k = 0; k < horizon; ++k) {
        StageCertificate& sc = cert.stages[k];
        sc.empirical = empirical_lipschitz(solution.values[k],
                                           seed + static_cast<std::uint64_t>(k));
        sc.slack = slack_factor * sc.bound * h_u[k] / solution.values[k].min_spacing();
        sc.pass = sc.empirical <= sc.bound + sc.slack + 1e-12;
    }
    cert.terminal_bound = terminal_lip;
    cert.terminal_empirical = empirical_lipschitz(
        solution.values[horizon], seed + static_cast<std::uint64_t>(horizon));
    cert.terminal_pass = cert.terminal_empirical <= cert.terminal_bound + 1e-9;
    return cert;
}

}  // namespace lipdp
