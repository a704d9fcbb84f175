#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "lipdp/errors.hpp"

namespace lipdp {

/// Finite point cloud in R^p standing for (a sampling of) a compact set.
/// Points are matrix columns; the set is non-empty by construction.
class FiniteSet {
public:
    explicit FiniteSet(Eigen::MatrixXd points);
    static FiniteSet from_points(const std::vector<Eigen::VectorXd>& pts);

    Eigen::Index dim() const { return points_.rows(); }
    Eigen::Index size() const { return points_.cols(); }
    Eigen::VectorXd point(Eigen::Index i) const { return points_.col(i); }
    const Eigen::MatrixXd& points() const { return points_; }

private:
    Eigen::MatrixXd points_;
};

/// Exact Hausdorff distance between finite sets, Euclidean ground metric.
/// Symmetric, zero iff the sets are equal as point sets.
double hausdorff_distance(const FiniteSet& a, const FiniteSet& b);

/// max over the sample of f. As a map on compact sets this inherits the
/// Lipschitz constant of f with respect to the Hausdorff distance.
double marginal_max(const std::function<double(const Eigen::VectorXd&)>& f,
                    const FiniteSet& k);

}  // namespace lipdp
