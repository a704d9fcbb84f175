#pragma once

#include <Eigen/Core>
#include <vector>

#include "lipdp/errors.hpp"
#include "lipdp/rng.hpp"

namespace lipdp {

/// Number of lattice cells needed to cover `length` at mesh <= h.
int cells_for_mesh(double length, double h);

/// Convex state regions: axis-aligned boxes in R^m and the 2-D wealth region
/// {S, B >= floor, S + B <= cap}. Convexity makes the arc constant a(X) = 1:
/// any two member points are joined by the straight segment, whose length is
/// exactly their distance.
class StateSpace {
public:
    static constexpr double kMembershipTol = 1e-9;

    static StateSpace box(Eigen::VectorXd lo, Eigen::VectorXd hi);
    static StateSpace wealth_region(double floor_value, double cap);

    int dim() const { return static_cast<int>(lo_.size()); }
    double con_constant() const { return 1.0; }

    bool contains(const Eigen::VectorXd& x, double tol = kMembershipTol) const;
    /// Exact Euclidean projection onto the region.
    Eigen::VectorXd project(const Eigen::VectorXd& x) const;

    /// Bounding box.
    const Eigen::VectorXd& lower() const { return lo_; }
    const Eigen::VectorXd& upper() const { return hi_; }

    /// Regular lattice at mesh <= h restricted to the region, lexicographic
    /// order. Node coordinates snap exactly to the bounding-box bounds.
    std::vector<Eigen::VectorXd> sample_grid(double h) const;

    /// Uniform random member point (rejection from the bounding box).
    Eigen::VectorXd sample_point(SplitMix64& rng) const;

    bool is_wealth_region() const { return kind_ == Kind::Wealth; }
    double wealth_floor() const { return floor_; }
    double wealth_cap() const { return cap_; }

private:
    enum class Kind { Box, Wealth };
    StateSpace(Kind kind, Eigen::VectorXd lo, Eigen::VectorXd hi)
        : kind_(kind), lo_(std::move(lo)), hi_(std::move(hi)) {}

    Kind kind_;
    Eigen::VectorXd lo_, hi_;  // bounding box
    double floor_ = 0.0, cap_ = 0.0;
};

}  // namespace lipdp
