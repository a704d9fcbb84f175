#include "lipdp/constraint_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "lipdp/dense.hpp"

namespace lipdp {

Eigen::VectorXd constraint_value(const ConstraintSystem& cs, const Eigen::Vector2d& u,
                                 const Eigen::VectorXd& x) {
    if (cs.value) return cs.value(u, x);
    if (cs.scalar_value) {
        Eigen::VectorXd v(1);
        v[0] = cs.scalar_value(u, x);
        return v;
    }
    throw InvalidInput("ConstraintSystem: no value function supplied");
}

bool is_feasible(const ConstraintSystem& cs, const Eigen::Vector2d& u,
                 const Eigen::VectorXd& x, double tol) {
    if (cs.scalar_value) return cs.scalar_value(u, x) <= tol;
    return (constraint_value(cs, u, x).array() <= tol).all();
}

namespace {

double fd_step(double coord) { return 1e-6 * std::max(1.0, std::abs(coord)); }

}  // namespace

Eigen::MatrixXd control_jacobian(const ConstraintSystem& cs, const Eigen::Vector2d& u,
                                 const Eigen::VectorXd& x) {
    if (cs.control_jacobian) return cs.control_jacobian(u, x);
    Eigen::MatrixXd jac(cs.num_constraints, 2);
    for (int i = 0; i < 2; ++i) {
        const double step = fd_step(u[i]);
        Eigen::Vector2d up = u, dn = u;
        up[i] += step;
        dn[i] -= step;
        jac.col(i) = (constraint_value(cs, up, x) - constraint_value(cs, dn, x)) /
                     (2.0 * step);
    }
    return jac;
}

Eigen::MatrixXd state_jacobian(const ConstraintSystem& cs, const Eigen::Vector2d& u,
                               const Eigen::VectorXd& x) {
    if (cs.state_jacobian) return cs.state_jacobian(u, x);
    Eigen::MatrixXd jac(cs.num_constraints, cs.state_dim);
    for (int i = 0; i < cs.state_dim; ++i) {
        const double step = fd_step(x[i]);
        Eigen::VectorXd up = x, dn = x;
        up[i] += step;
        dn[i] -= step;
        jac.col(i) = (constraint_value(cs, u, up) - constraint_value(cs, u, dn)) /
                     (2.0 * step);
    }
    return jac;
}

Eigen::MatrixXd chart_differential(const ConstraintSystem& cs, const Chart& chart,
                                   const Eigen::Vector2d& u, const Eigen::VectorXd& x) {
    return control_jacobian(cs, u, x) * chart.tangent();
}

bool is_degenerate(const ConstraintSystem& cs, const ControlManifold& m,
                   const Eigen::Vector2d& u, double tol) {
    if (m.distance_to_nonregular(u) <= tol) return true;
    return cs.extra_degenerate && cs.extra_degenerate(u);
}

std::vector<std::vector<int>> increasing_multi_indices(int d, int j) {
    if (j < 1 || j > d) throw InvalidInput("multi-indices require 1 <= j <= d");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(j));
    for (int i = 0; i < j; ++i) cur[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(cur);
        int pos = j - 1;
        while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == d - j + pos) --pos;
        if (pos < 0) break;
        ++cur[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < j; ++i)
            cur[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i - 1)] + 1;
    }
    return out;
}

AdmissibleSample admissible_set(const ConstraintSystem& cs, const ControlManifold& m,
                                const Eigen::VectorXd& x, double h) {
    const auto candidates = sample_manifold_points(m, h);
    std::vector<Eigen::VectorXd> kept;
    for (const auto& u : candidates)
        if (is_feasible(cs, u, x)) kept.emplace_back(u);
    if (kept.empty()) {
        std::ostringstream os;
        os << "admissible_set: empty at state (" << x.transpose() << "), mesh " << h;
        throw EmptyAdmissible(os.str());
    }
    return AdmissibleSample{x, FiniteSet::from_points(kept), h};
}

AdmissibleSample admissible_set_refining(const ConstraintSystem& cs,
                                         const ControlManifold& m,
                                         const Eigen::VectorXd& x, double h,
                                         int max_halvings) {
    for (int attempt = 0;; ++attempt) {
        try {
            return admissible_set(cs, m, x, h);
        } catch (const EmptyAdmissible&) {
            if (attempt >= max_halvings) throw;
            h *= 0.5;
        }
    }
}

namespace {

// Shared sweep over sampled states and feasible nondegenerate controls.
template <typename Visit>
void sweep_feasible_regular(const ConstraintSystem& cs, const ControlManifold& m,
                            const StateSpace& region, double h_x, double h_u,
                            Visit&& visit) {
    const auto states = region.sample_grid(h_x);
    const auto controls = sample_manifold_points(m, h_u);
    for (const auto& x : states) {
        for (const auto& u : controls) {
            if (is_degenerate(cs, m, u)) continue;
            if (!is_feasible(cs, u, x)) continue;
            visit(u, x);
        }
    }
}

[[noreturn]] void throw_no_projection(const Eigen::Vector2d& u, const Eigen::VectorXd& x) {
    std::ostringstream os;
    os << "no invertible coordinate selection at control (" << u[0] << ", " << u[1]
       << "), state (" << x.transpose() << ")";
    throw NoInvertibleProjection(os.str());
}

}  // namespace

double tau_estimate(const ConstraintSystem& cs, const ControlManifold& m,
                    const StateSpace& region, double h_x, double h_u) {
    if (cs.num_constraints > m.chart_dim())
        throw InvalidInput("tau_estimate: more constraints than chart dimensions");
    const auto selections = increasing_multi_indices(m.chart_dim(), cs.num_constraints);
    double worst = 0.0;
    sweep_feasible_regular(cs, m, region, h_x, h_u,
                           [&](const Eigen::Vector2d& u, const Eigen::VectorXd& x) {
        const auto [chart, v] = chart_at(m, u);
        (void)v;
        const Eigen::MatrixXd jc = chart_differential(cs, chart, u, x);
        const Eigen::MatrixXd jx = state_jacobian(cs, u, x);
        double best = -1.0;
        for (const auto& sel : selections) {
            Eigen::MatrixXd r(cs.num_constraints, cs.num_constraints);
            for (int l = 0; l < cs.num_constraints; ++l)
                r.col(l) = jc.col(sel[static_cast<std::size_t>(l)]);
            if (!invertible_at_scale(r)) continue;
            best = std::max(best, operator_norm(r.partialPivLu().solve(jx)));
        }
        if (best < 0.0) throw_no_projection(u, x);
        worst = std::max(worst, best);
    });
    return worst;
}

std::pair<double, double> lambda_mu_bounds(const ConstraintSystem& cs,
                                           const ControlManifold& m,
                                           const StateSpace& region, double h_x,
                                           double h_u, double r) {
    if (!(r > 0.0)) throw InvalidInput("lambda_mu_bounds: state radius must be positive");
    if (cs.num_constraints > m.chart_dim())
        throw InvalidInput("lambda_mu_bounds: more constraints than chart dimensions");
    const auto selections = increasing_multi_indices(m.chart_dim(), cs.num_constraints);
    double lambda = 0.0, mu = 0.0;
    sweep_feasible_regular(cs, m, region, h_x, h_u,
                           [&](const Eigen::Vector2d& u, const Eigen::VectorXd& x) {
        const auto [chart, v] = chart_at(m, u);
        (void)v;
        const Eigen::MatrixXd jc = chart_differential(cs, chart, u, x);
        bool any = false;
        for (const auto& sel : selections) {
            Eigen::MatrixXd rr(cs.num_constraints, cs.num_constraints);
            for (int l = 0; l < cs.num_constraints; ++l)
                rr.col(l) = jc.col(sel[static_cast<std::size_t>(l)]);
            if (!invertible_at_scale(rr)) continue;
            any = true;
            lambda = std::max(lambda, inverse_operator_norm(rr));
        }
        if (!any) throw_no_projection(u, x);
        mu = std::max(mu, operator_norm(state_jacobian(cs, u, x)));
        for (int i = 0; i < cs.state_dim; ++i) {
            for (const double sign : {-1.0, 1.0}) {
                Eigen::VectorXd y = x;
                y[i] += sign * r;
                mu = std::max(mu, operator_norm(state_jacobian(cs, u, y)));
            }
        }
    });
    return {lambda, mu};
}

AdherenceCheck check_adherence(const ConstraintSystem& cs, const ControlManifold& m,
                               const Eigen::VectorXd& x, double sigma, double h) {
    if (!(sigma > 0.0)) throw InvalidInput("check_adherence: sigma must be positive");
    const auto controls = sample_manifold_points(m, h);
    std::vector<Eigen::Vector2d> feasible;
    for (const auto& u : controls)
        if (is_feasible(cs, u, x)) feasible.push_back(u);

    auto near_degenerate = [&](const Eigen::Vector2d& u) {
        return m.distance_to_nonregular(u) <= h ||
               (cs.extra_degenerate && cs.extra_degenerate(u));
    };
    auto passes_at = [&](double radius, std::optional<Eigen::Vector2d>* witness) {
        for (const auto& u : feasible) {
            if (!near_degenerate(u)) continue;
            bool found = false;
            for (const auto& w : feasible) {
                if (is_degenerate(cs, m, w)) continue;
                if ((w - u).norm() <= radius) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                if (witness) *witness = u;
                return false;
            }
        }
        return true;
    };

    AdherenceCheck result;
    result.sigma = sigma;
    result.ok = passes_at(sigma, &result.failing);
    result.sigma_achieved = std::numeric_limits<double>::infinity();
    if (result.ok) {
        result.sigma_achieved = sigma;
        double level = sigma;
        for (int step = 1; step < 8; ++step) {
            level *= 0.5;
            if (!passes_at(level, nullptr)) break;
            result.sigma_achieved = level;
        }
    }
    return result;
}

ProbeReport multifunction_lipschitz_probe(const ConstraintSystem& cs,
                                          const ControlManifold& m,
                                          const StateSpace& region, double h_x,
                                          double h_u, int n_pairs, double tau,
                                          SplitMix64& rng) {
    if (n_pairs < 1) throw InvalidInput("probe: n_pairs must be positive");
    const auto states = region.sample_grid(h_x);
    if (states.size() < 2) throw InvalidInput("probe: need at least two grid states");

    // Effective spacing of the manifold sampling (power-of-two subdivision).
    const auto& lo = m.lower();
    const auto& hi = m.upper();
    const double spacing =
        std::max((hi[0] - lo[0]) / pow2_segments(hi[0] - lo[0], h_u),
                 (hi[1] - lo[1]) / pow2_segments(hi[1] - lo[1], h_u));

    ProbeReport report;
    report.theoretical_bound = region.con_constant() * tau * m.lip_bound();
    report.slack = 2.0 * spacing;

    std::map<std::size_t, AdmissibleSample> cache;
    auto admissible_at = [&](std::size_t idx) -> const AdmissibleSample& {
        auto it = cache.find(idx);
        if (it == cache.end())
            it = cache.emplace(idx, admissible_set(cs, m, states[idx], h_u)).first;
        return it->second;
    };

    report.pairs.reserve(static_cast<std::size_t>(n_pairs));
    for (int p = 0; p < n_pairs; ++p) {
        std::size_t a = 0, b = 0;
        do {
            a = static_cast<std::size_t>(rng.below(states.size()));
            b = static_cast<std::size_t>(rng.below(states.size()));
        } while (a == b);
        const double dist = (states[a] - states[b]).norm();
        const double dh =
            hausdorff_distance(admissible_at(a).controls, admissible_at(b).controls);
        ProbePair row{dist, dh, report.theoretical_bound * dist + report.slack};
        report.within_bound = report.within_bound && dh <= row.bound + 1e-12;
        report.modulus = std::max(report.modulus, dh / dist);
        report.pairs.push_back(row);
    }
    return report;
}

}  // namespace lipdp
