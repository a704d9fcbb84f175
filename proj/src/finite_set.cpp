#include "lipdp/finite_set.hpp"

#include <cmath>
#include <limits>

namespace lipdp {

FiniteSet::FiniteSet(Eigen::MatrixXd points) : points_(std::move(points)) {
    if (points_.cols() == 0)
        throw InvalidInput("FiniteSet: empty point set rejected");
    if (points_.rows() == 0)
        throw InvalidInput("FiniteSet: points must have dimension >= 1");
    if (!points_.allFinite())
        throw InvalidInput("FiniteSet: points must be finite-valued");
}

FiniteSet FiniteSet::from_points(const std::vector<Eigen::VectorXd>& pts) {
    if (pts.empty()) throw InvalidInput("FiniteSet: empty point set rejected");
    Eigen::MatrixXd m(pts.front().size(), static_cast<Eigen::Index>(pts.size()));
    for (Eigen::Index i = 0; i < m.cols(); ++i) {
        if (pts[static_cast<std::size_t>(i)].size() != m.rows())
            throw InvalidInput("FiniteSet: points have mixed dimensions");
        m.col(i) = pts[static_cast<std::size_t>(i)];
    }
    return FiniteSet(std::move(m));
}

namespace {

// Directed squared Hausdorff distance max_a min_b |a-b|^2 with the classic
// early break: once the inner minimum drops to the running maximum, the
// outer point cannot raise it.
double directed_sq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            const double d2 = (a.col(i) - b.col(j)).squaredNorm();
            if (d2 < best) {
                best = d2;
                if (best <= worst) break;
            }
        }
        if (best > worst) worst = best;
    }
    return worst;
}

}  // namespace

double hausdorff_distance(const FiniteSet& a, const FiniteSet& b) {
    if (a.dim() != b.dim())
        throw InvalidInput("hausdorff_distance: dimension mismatch");
    const double d2 = std::max(directed_sq(a.points(), b.points()),
                               directed_sq(b.points(), a.points()));
    return std::sqrt(d2);
}

double marginal_max(const std::function<double(const Eigen::VectorXd&)>& f,
                    const FiniteSet& k) {
    double best = f(k.point(0));
    for (Eigen::Index i = 1; i < k.size(); ++i)
        best = std::max(best, f(k.point(i)));
    return best;
}

}  // namespace lipdp
