#include "lipdp/implicit_function.hpp"

#include <algorithm>
#include <cmath>

#include "lipdp/dense.hpp"

namespace lipdp {

namespace {

constexpr int kHaltonBases[] = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(int base, std::uint64_t i) {
    double f = 1.0, r = 0.0;
    while (i) {
        f /= base;
        r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
        i /= static_cast<std::uint64_t>(base);
    }
    return r;
}

void check_domain(const ImplicitProblem& p, const Eigen::VectorXd& v,
                  const Eigen::VectorXd& y) {
    if (p.in_domain && !p.in_domain(v, y))
        throw DomainViolation("implicit problem: sample point left the domain");
}

}  // namespace

std::vector<Eigen::VectorXd> ball_samples(const Eigen::VectorXd& center, double radius,
                                          int n) {
    const int dim = static_cast<int>(center.size());
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(n) + 2 * static_cast<std::size_t>(dim) + 1);
    out.push_back(center);
    for (int i = 0; i < dim; ++i) {
        for (const double sign : {-1.0, 1.0}) {
            Eigen::VectorXd p = center;
            p[i] += sign * radius;
            out.push_back(p);
        }
    }
    Eigen::VectorXd q(dim);
    for (std::uint64_t k = 1; static_cast<int>(out.size()) < n; ++k) {
        for (int i = 0; i < dim; ++i)
            q[i] = 2.0 * radical_inverse(kHaltonBases[i % 8], k) - 1.0;
        if (q.norm() <= 1.0) out.push_back(center + radius * q);
    }
    return out;
}

Eigen::MatrixXd anchor_inverse(const ImplicitProblem& p) {
    if (!p.residual || !p.jac_v)
        throw InvalidInput("implicit problem: residual and jac_v are required");
    if (!(p.r1 > 0.0) || !(p.r2 > 0.0))
        throw InvalidInput("implicit problem: radii must be positive");
    const Eigen::VectorXd f0 = p.residual(p.v0, p.y0);
    if (f0.norm() > 1e-10)
        throw InvalidInput("implicit problem: anchor is not a root (|F(v0,y0)| > 1e-10)");
    const Eigen::MatrixXd jv = p.jac_v(p.v0, p.y0);
    if (!invertible_at_scale(jv))
        throw SingularJacobian("implicit problem: dF/dv singular at the anchor");
    return jv.inverse();
}

RadiiReport verify_radii(const ImplicitProblem& p, int n_samples) {
    const Eigen::MatrixXd t0 = anchor_inverse(p);
    const Eigen::MatrixXd identity =
        Eigen::MatrixXd::Identity(t0.rows(), t0.cols());

    RadiiReport report;
    report.residual_bound = p.r1 / (2.0 * operator_norm(t0));

    const auto ys = ball_samples(p.y0, p.r2, n_samples);
    for (const auto& y : ys) {
        check_domain(p, p.v0, y);
        report.residual_sup = std::max(report.residual_sup, p.residual(p.v0, y).norm());
    }

    // Product sampling of B1 x B2: the cross of the per-ball anchor points,
    // then a joint Halton fill over both balls.
    const auto vs_small = ball_samples(p.v0, p.r1, 0);
    const auto ys_small = ball_samples(p.y0, p.r2, 0);
    auto visit = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& y) {
        check_domain(p, v, y);
        report.contraction_sup = std::max(
            report.contraction_sup, operator_norm(identity - t0 * p.jac_v(v, y)));
    };
    for (const auto& v : vs_small)
        for (const auto& y : ys_small) visit(v, y);
    const int jdim = static_cast<int>(p.v0.size());
    const int mdim = static_cast<int>(p.y0.size());
    Eigen::VectorXd qv(jdim), qy(mdim);
    int accepted = 0;
    for (std::uint64_t k = 1; accepted < n_samples; ++k) {
        for (int i = 0; i < jdim; ++i)
            qv[i] = 2.0 * radical_inverse(kHaltonBases[i % 8], k) - 1.0;
        for (int i = 0; i < mdim; ++i)
            qy[i] = 2.0 * radical_inverse(kHaltonBases[(jdim + i) % 8], k) - 1.0;
        if (qv.norm() > 1.0 || qy.norm() > 1.0) continue;
        visit(p.v0 + p.r1 * qv, p.y0 + p.r2 * qy);
        ++accepted;
    }

    report.ok = report.residual_margin() > 0.0 && report.contraction_margin() > 0.0;
    return report;
}

Eigen::VectorXd solve_implicit(const ImplicitProblem& p, const Eigen::VectorXd& y,
                               double tol, int max_iter,
                               std::vector<double>* residual_trace,
                               const Eigen::VectorXd* start) {
    if ((y - p.y0).norm() > p.r2 * (1.0 + 1e-12))
        throw InvalidInput("solve_implicit: query point outside the certified ball");
    const Eigen::MatrixXd t0 = anchor_inverse(p);
    Eigen::VectorXd v = start ? *start : p.v0;
    if ((v - p.v0).norm() > p.r1 * (1.0 + 1e-12))
        throw InvalidInput("solve_implicit: start point outside the certified ball");
    for (int it = 0; it <= max_iter; ++it) {
        const Eigen::VectorXd rez = p.residual(v, y);
        if (residual_trace) residual_trace->push_back(rez.norm());
        if (rez.norm() <= tol) return v;
        if (it == max_iter) break;
        v -= t0 * rez;
        if ((v - p.v0).norm() > p.r1 * (1.0 + 1e-12))
            throw LeftBall("solve_implicit: iterate left the certified ball");
    }
    throw NoConvergence("solve_implicit: residual tolerance not reached");
}

Eigen::MatrixXd implicit_jacobian(const ImplicitProblem& p, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& v) {
    if (!p.jac_y) throw InvalidInput("implicit_jacobian: jac_y is required");
    const Eigen::MatrixXd jv = p.jac_v(v, y);
    if (!invertible_at_scale(jv))
        throw SingularJacobian("implicit_jacobian: dF/dv below determinant threshold");
    return -jv.partialPivLu().solve(p.jac_y(v, y));
}

Eigen::VectorXd embed_subvector(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                const std::vector<int>& idx) {
    if (static_cast<Eigen::Index>(idx.size()) != v.size())
        throw InvalidInput("embed_subvector: index count must match the subvector");
    if (idx.empty()) throw InvalidInput("embed_subvector: empty index list");
    for (std::size_t l = 0; l < idx.size(); ++l) {
        if (idx[l] < 0 || idx[l] >= u.size())
            throw InvalidInput("embed_subvector: index out of range");
        if (l > 0 && idx[l] <= idx[l - 1])
            throw InvalidInput("embed_subvector: indices must be strictly increasing");
    }
    Eigen::VectorXd out = u;
    for (std::size_t l = 0; l < idx.size(); ++l)
        out[idx[l]] = v[static_cast<Eigen::Index>(l)];
    return out;
}

}  // namespace lipdp
