#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "lipdp/errors.hpp"
#include "lipdp/finite_set.hpp"

namespace lipdp {

/// Inverse of a regular chart: a unit-speed axis-aligned open segment in R^2.
/// phi(t) varies coordinate `axis`, the other coordinate is pinned. |phi'|=1,
/// so every chart inverse is an isometry onto its edge.
struct Chart {
    int axis;           // coordinate that varies along the edge
    double fixed;       // the pinned coordinate
    double t_lo, t_hi;  // open parameter interval

    Eigen::Vector2d at(double t) const {
        Eigen::Vector2d p;
        p[axis] = t;
        p[1 - axis] = fixed;
        return p;
    }
    Eigen::Vector2d tangent() const {
        Eigen::Vector2d d = Eigen::Vector2d::Zero();
        d[axis] = 1.0;
        return d;
    }
};

/// 1-dimensional Lipschitz control manifolds in R^2:
///  - BoxBoundary: the boundary of a rectangle,
///  - Box: a full rectangle viewed as the nest of rectangle boundaries
///    that share its bottom, top and right edges (left edges sweep across).
/// Chart inverses are unit-speed edges, so the manifold-wide chart bound is 1.
/// The nonregular points are the four corners.
class ControlManifold {
public:
    static constexpr double kOnManifoldTol = 1e-10;

    enum class Kind { BoxBoundary, Box };

    static ControlManifold box_boundary(const Eigen::Vector2d& lo,
                                        const Eigen::Vector2d& hi);
    static ControlManifold box(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi);

    Kind kind() const { return kind_; }
    const Eigen::Vector2d& lower() const { return lo_; }
    const Eigen::Vector2d& upper() const { return hi_; }
    int ambient_dim() const { return 2; }
    int chart_dim() const { return 1; }
    /// Upper bound on the Lipschitz constants of all chart inverses (Lip_M).
    double lip_bound() const { return 1.0; }
    const std::vector<Eigen::Vector2d>& nonregular_points() const { return vertices_; }

    bool contains(const Eigen::Vector2d& u, double tol = kOnManifoldTol) const;
    double distance_to_nonregular(const Eigen::Vector2d& u) const;

private:
    ControlManifold(Kind kind, Eigen::Vector2d lo, Eigen::Vector2d hi);

    Kind kind_;
    Eigen::Vector2d lo_, hi_;
    std::vector<Eigen::Vector2d> vertices_;
};

/// Chart through a regular manifold point together with the parameter value v,
/// phi(v) = u. Throws NonregularPoint at a vertex and InvalidInput off the
/// manifold.
std::pair<Chart, double> chart_at(const ControlManifold& m, const Eigen::Vector2d& u);

/// Smallest power-of-two segment count with spacing <= h; makes samplings
/// nested under mesh halving.
int pow2_segments(double length, double h);

/// Arc-length sampling at spacing <= h, vertices always included,
/// lexicographically sorted. For the Box kind this is the union of the nest
/// boundaries' samplings, i.e. a regular grid over the rectangle.
FiniteSet sample_manifold(const ControlManifold& m, double h);

/// Same point set as sample_manifold, kept as plain vectors (hot loops).
std::vector<Eigen::Vector2d> sample_manifold_points(const ControlManifold& m, double h);

}  // namespace lipdp
