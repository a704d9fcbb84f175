#include "lipdp/control_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lipdp {

ControlManifold::ControlManifold(Kind kind, Eigen::Vector2d lo, Eigen::Vector2d hi)
    : kind_(kind), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (!(lo_[0] < hi_[0]) || !(lo_[1] < hi_[1]))
        throw InvalidInput("ControlManifold: degenerate rectangle");
    vertices_ = {Eigen::Vector2d(lo_[0], lo_[1]), Eigen::Vector2d(hi_[0], lo_[1]),
                 Eigen::Vector2d(hi_[0], hi_[1]), Eigen::Vector2d(lo_[0], hi_[1])};
}

ControlManifold ControlManifold::box_boundary(const Eigen::Vector2d& lo,
                                              const Eigen::Vector2d& hi) {
    return ControlManifold(Kind::BoxBoundary, lo, hi);
}

ControlManifold ControlManifold::box(const Eigen::Vector2d& lo,
                                     const Eigen::Vector2d& hi) {
    return ControlManifold(Kind::Box, lo, hi);
}

bool ControlManifold::contains(const Eigen::Vector2d& u, double tol) const {
    const bool in_box = u[0] >= lo_[0] - tol && u[0] <= hi_[0] + tol &&
                        u[1] >= lo_[1] - tol && u[1] <= hi_[1] + tol;
    if (kind_ == Kind::Box) return in_box;
    if (!in_box) return false;
    const double edge = std::min(
        std::min(std::abs(u[0] - lo_[0]), std::abs(u[0] - hi_[0])),
        std::min(std::abs(u[1] - lo_[1]), std::abs(u[1] - hi_[1])));
    return edge <= tol;
}

double ControlManifold::distance_to_nonregular(const Eigen::Vector2d& u) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices_) best = std::min(best, (u - v).norm());
    return best;
}

std::pair<Chart, double> chart_at(const ControlManifold& m, const Eigen::Vector2d& u) {
    const double tol = ControlManifold::kOnManifoldTol;
    if (!m.contains(u, tol)) {
        std::ostringstream os;
        os << "chart_at: point (" << u[0] << ", " << u[1] << ") is off the manifold";
        throw InvalidInput(os.str());
    }
    if (m.distance_to_nonregular(u) <= tol) {
        std::ostringstream os;
        os << "chart_at: (" << u[0] << ", " << u[1] << ") is a nonregular point";
        throw NonregularPoint(os.str());
    }
    const auto& lo = m.lower();
    const auto& hi = m.upper();
    if (m.kind() == ControlManifold::Kind::BoxBoundary) {
        if (std::abs(u[1] - lo[1]) <= tol)
            return {Chart{0, lo[1], lo[0], hi[0]}, u[0]};  // bottom edge
        if (std::abs(u[0] - hi[0]) <= tol)
            return {Chart{1, hi[0], lo[1], hi[1]}, u[1]};  // right edge
        if (std::abs(u[1] - hi[1]) <= tol)
            return {Chart{0, hi[1], lo[0], hi[0]}, u[0]};  // top edge
        return {Chart{1, lo[0], lo[1], hi[1]}, u[1]};      // left edge
    }
    // Box: shared horizontal edges first, then the shared right edge, and
    // interior points sit on the left edge of the nest member through them.
    if (std::abs(u[1] - lo[1]) <= tol)
        return {Chart{0, lo[1], lo[0], hi[0]}, u[0]};
    if (std::abs(u[1] - hi[1]) <= tol)
        return {Chart{0, hi[1], lo[0], hi[0]}, u[0]};
    if (std::abs(u[0] - hi[0]) <= tol)
        return {Chart{1, hi[0], lo[1], hi[1]}, u[1]};
    return {Chart{1, u[0], lo[1], hi[1]}, u[1]};
}

int pow2_segments(double length, double h) {
    if (!(h > 0.0)) throw InvalidInput("sample_manifold: mesh must be positive");
    int n = 1;
    while (length / n > h * (1.0 + 1e-12)) {
        n *= 2;
        if (n > (1 << 22)) throw InvalidInput("sample_manifold: mesh too fine");
    }
    return n;
}

namespace {

double grid_coord(double lo, double hi, int i, int n, double step) {
    if (i == 0) return lo;
    if (i == n) return hi;
    return lo + i * step;
}

}  // namespace

std::vector<Eigen::Vector2d> sample_manifold_points(const ControlManifold& m, double h) {
    const auto& lo = m.lower();
    const auto& hi = m.upper();
    const int nx = pow2_segments(hi[0] - lo[0], h);
    const int ny = pow2_segments(hi[1] - lo[1], h);
    const double sx = (hi[0] - lo[0]) / nx;
    const double sy = (hi[1] - lo[1]) / ny;

    std::vector<Eigen::Vector2d> pts;
    if (m.kind() == ControlManifold::Kind::Box) {
        pts.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
        for (int i = 0; i <= nx; ++i)
            for (int j = 0; j <= ny; ++j)
                pts.emplace_back(grid_coord(lo[0], hi[0], i, nx, sx),
                                 grid_coord(lo[1], hi[1], j, ny, sy));
    } else {
        pts.reserve(static_cast<std::size_t>(2 * (nx + ny)));
        // Perimeter walk, skipping each edge's terminal vertex.
        for (int i = 0; i < nx; ++i)
            pts.emplace_back(grid_coord(lo[0], hi[0], i, nx, sx), lo[1]);
        for (int j = 0; j < ny; ++j)
            pts.emplace_back(hi[0], grid_coord(lo[1], hi[1], j, ny, sy));
        for (int i = nx; i > 0; --i)
            pts.emplace_back(grid_coord(lo[0], hi[0], i, nx, sx), hi[1]);
        for (int j = ny; j > 0; --j)
            pts.emplace_back(lo[0], grid_coord(lo[1], hi[1], j, ny, sy));
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    return pts;
}

FiniteSet sample_manifold(const ControlManifold& m, double h) {
    const auto pts = sample_manifold_points(m, h);
    Eigen::MatrixXd mat(2, static_cast<Eigen::Index>(pts.size()));
    for (Eigen::Index i = 0; i < mat.cols(); ++i)
        mat.col(i) = pts[static_cast<std::size_t>(i)];
    return FiniteSet(std::move(mat));
}

}  // namespace lipdp
