#include "lipdp/value_function.hpp"

#include <algorithm>
#include <cmath>

#include "lipdp/rng.hpp"

namespace lipdp {

ValueFunction::ValueFunction(StateSpace region, double mesh)
    : region_(std::move(region)), mesh_(mesh) {
    const int m = region_.dim();
    if (m > 8) throw InvalidInput("ValueFunction: at most 8 state dimensions");
    lo_ = region_.lower();
    hi_ = region_.upper();
    spacing_.resize(m);
    npts_.resize(static_cast<std::size_t>(m));
    Eigen::Index total = 1;
    for (int a = 0; a < m; ++a) {
        const int cells = cells_for_mesh(hi_[a] - lo_[a], mesh);
        npts_[static_cast<std::size_t>(a)] = cells + 1;
        spacing_[a] = (hi_[a] - lo_[a]) / cells;
        total *= cells + 1;
    }
    strides_.assign(static_cast<std::size_t>(m), 1);
    for (int a = m - 2; a >= 0; --a)
        strides_[static_cast<std::size_t>(a)] =
            strides_[static_cast<std::size_t>(a + 1)] * npts_[static_cast<std::size_t>(a + 1)];
    values_.assign(static_cast<std::size_t>(total), 0.0);
    inside_.resize(static_cast<std::size_t>(total));
    for (Eigen::Index flat = 0; flat < total; ++flat)
        inside_[static_cast<std::size_t>(flat)] =
            region_.contains(node(flat)) ? 1 : 0;
}

double ValueFunction::coordinate(int axis, int i) const {
    if (i == npts_[static_cast<std::size_t>(axis)] - 1) return hi_[axis];
    return lo_[axis] + i * spacing_[axis];
}

Eigen::VectorXd ValueFunction::node(Eigen::Index flat) const {
    const int m = dim();
    Eigen::VectorXd x(m);
    for (int a = 0; a < m; ++a) {
        const Eigen::Index i = flat / strides_[static_cast<std::size_t>(a)];
        flat -= i * strides_[static_cast<std::size_t>(a)];
        x[a] = coordinate(a, static_cast<int>(i));
    }
    return x;
}

double ValueFunction::min_spacing() const { return spacing_.minCoeff(); }

std::vector<Eigen::Index> ValueFunction::inside_nodes() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index flat = 0; flat < node_count(); ++flat)
        if (node_inside(flat)) out.push_back(flat);
    return out;
}

double ValueFunction::operator()(const Eigen::VectorXd& x) const {
    const int m = dim();
    Eigen::VectorXd p = region_.contains(x) ? x : region_.project(x);

    // Cell location and barycentric weights per axis.
    int base_idx[8];
    double frac[8];
    for (int a = 0; a < m; ++a) {
        const double t = (p[a] - lo_[a]) / spacing_[a];
        int i = static_cast<int>(std::floor(t));
        i = std::clamp(i, 0, npts_[static_cast<std::size_t>(a)] - 2);
        base_idx[a] = i;
        frac[a] = std::clamp(t - i, 0.0, 1.0);
    }
    double acc = 0.0;
    const int corners = 1 << m;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        Eigen::Index flat = 0;
        for (int a = 0; a < m; ++a) {
            const int bit = (c >> a) & 1;
            w *= bit ? frac[a] : 1.0 - frac[a];
            flat += static_cast<Eigen::Index>(base_idx[a] + bit) *
                    strides_[static_cast<std::size_t>(a)];
        }
        if (w != 0.0) acc += w * values_[static_cast<std::size_t>(flat)];
    }
    return acc;
}

double empirical_lipschitz(const ValueFunction& f, std::uint64_t seed) {
    const auto nodes = f.inside_nodes();
    const std::size_t n = nodes.size();
    if (n < 2) return 0.0;

    // Cache coordinates; pair loops are the hot path.
    Eigen::MatrixXd coords(f.dim(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd vals(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        coords.col(static_cast<Eigen::Index>(i)) = f.node(nodes[i]);
        vals[static_cast<Eigen::Index>(i)] = f.value(nodes[i]);
    }
    auto quotient = [&](std::size_t a, std::size_t b) {
        const double d = (coords.col(static_cast<Eigen::Index>(a)) -
                          coords.col(static_cast<Eigen::Index>(b)))
                             .norm();
        return std::abs(vals[static_cast<Eigen::Index>(a)] -
                        vals[static_cast<Eigen::Index>(b)]) /
               d;
    };

    double best = 0.0;
    const std::uint64_t total_pairs =
        static_cast<std::uint64_t>(n) * (static_cast<std::uint64_t>(n) - 1) / 2;
    if (total_pairs <= 1000000ull) {
        for (std::size_t a = 0; a + 1 < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                best = std::max(best, quotient(a, b));
    } else {
        SplitMix64 rng(seed);
        for (int draw = 0; draw < 100000; ++draw) {
            std::size_t a = 0, b = 0;
            do {
                a = static_cast<std::size_t>(rng.below(n));
                b = static_cast<std::size_t>(rng.below(n));
            } while (a == b);
            best = std::max(best, quotient(a, b));
        }
    }
    return best;
}

}  // namespace lipdp
