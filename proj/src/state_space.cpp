#include "lipdp/state_space.hpp"

#include <algorithm>
#include <cmath>

namespace lipdp {

int cells_for_mesh(double length, double h) {
    if (!(h > 0.0)) throw InvalidInput("mesh must be positive");
    if (!(length >= 0.0)) throw InvalidInput("interval length must be nonnegative");
    const int cells = static_cast<int>(std::ceil(length / h - 1e-12));
    return std::max(1, cells);
}

StateSpace StateSpace::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if (lo.size() != hi.size() || lo.size() == 0)
        throw InvalidInput("StateSpace::box: bounds must have equal positive dimension");
    for (Eigen::Index i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i]))
            throw InvalidInput("StateSpace::box: lower bound must be below upper bound");
    return StateSpace(Kind::Box, std::move(lo), std::move(hi));
}

StateSpace StateSpace::wealth_region(double floor_value, double cap) {
    if (!(floor_value > 0.0))
        throw InvalidInput("StateSpace::wealth_region: floor must be positive");
    if (!(cap > 2.0 * floor_value))
        throw InvalidInput("StateSpace::wealth_region: cap must exceed twice the floor");
    Eigen::VectorXd lo(2), hi(2);
    lo << floor_value, floor_value;
    hi << cap - floor_value, cap - floor_value;
    StateSpace s(Kind::Wealth, std::move(lo), std::move(hi));
    s.floor_ = floor_value;
    s.cap_ = cap;
    return s;
}

bool StateSpace::contains(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != lo_.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
    if (kind_ == Kind::Wealth && x.sum() > cap_ + tol) return false;
    return true;
}

namespace {

Eigen::Vector2d project_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    double t = ab.dot(p - a) / ab.squaredNorm();
    t = std::clamp(t, 0.0, 1.0);
    return a + t * ab;
}

}  // namespace

Eigen::VectorXd StateSpace::project(const Eigen::VectorXd& x) const {
    if (x.size() != lo_.size())
        throw InvalidInput("StateSpace::project: dimension mismatch");
    if (kind_ == Kind::Box) {
        Eigen::VectorXd p = x;
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p[i] = std::clamp(p[i], lo_[i], hi_[i]);
        return p;
    }
    if (contains(x, 0.0)) return x;
    // Triangle with vertices (f,f), (f,c-f), (c-f,f): closest point over the
    // three edges.
    const double f = floor_, c = cap_;
    const Eigen::Vector2d p(x[0], x[1]);
    const Eigen::Vector2d v1(f, f), v2(f, c - f), v3(c - f, f);
    Eigen::Vector2d best = project_segment(p, v1, v2);
    for (const auto& cand : {project_segment(p, v1, v3), project_segment(p, v2, v3)}) {
        if ((p - cand).squaredNorm() < (p - best).squaredNorm()) best = cand;
    }
    return best;
}

std::vector<Eigen::VectorXd> StateSpace::sample_grid(double h) const {
    const int m = dim();
    std::vector<int> npts(static_cast<std::size_t>(m));
    std::vector<double> spacing(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        const int cells = cells_for_mesh(hi_[a] - lo_[a], h);
        npts[static_cast<std::size_t>(a)] = cells + 1;
        spacing[static_cast<std::size_t>(a)] = (hi_[a] - lo_[a]) / cells;
    }
    std::vector<Eigen::VectorXd> out;
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    Eigen::VectorXd node(m);
    while (true) {
        for (int a = 0; a < m; ++a) {
            const int i = idx[static_cast<std::size_t>(a)];
            node[a] = (i == npts[static_cast<std::size_t>(a)] - 1)
                          ? hi_[a]
                          : lo_[a] + i * spacing[static_cast<std::size_t>(a)];
        }
        if (contains(node)) out.push_back(node);
        int a = m - 1;
        while (a >= 0 && ++idx[static_cast<std::size_t>(a)] ==
                             npts[static_cast<std::size_t>(a)]) {
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return out;
}

Eigen::VectorXd StateSpace::sample_point(SplitMix64& rng) const {
    Eigen::VectorXd p(dim());
    while (true) {
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p[i] = rng.uniform(lo_[i], hi_[i]);
        if (contains(p, 0.0)) return p;
    }
}

}  // namespace lipdp
