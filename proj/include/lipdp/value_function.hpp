#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "lipdp/state_space.hpp"

namespace lipdp {

/// Value table on the regular lattice covering the bounding box of a state
/// region. Nodes outside the region carry values too (the recursion is well
/// defined there); they are excluded from Lipschitz estimation and reports.
/// Evaluation clamps the query to the region and interpolates multilinearly.
class ValueFunction {
public:
    ValueFunction(StateSpace region, double mesh);

    int dim() const { return region_.dim(); }
    Eigen::Index node_count() const { return static_cast<Eigen::Index>(values_.size()); }
    Eigen::VectorXd node(Eigen::Index flat) const;
    bool node_inside(Eigen::Index flat) const { return inside_[static_cast<std::size_t>(flat)] != 0; }
    double value(Eigen::Index flat) const { return values_[static_cast<std::size_t>(flat)]; }
    void set_value(Eigen::Index flat, double v) { values_[static_cast<std::size_t>(flat)] = v; }

    double min_spacing() const;
    double mesh() const { return mesh_; }
    const std::vector<int>& shape() const { return npts_; }
    const StateSpace& region() const { return region_; }
    std::vector<Eigen::Index> inside_nodes() const;

    /// Interpolating evaluation (multilinear; queries outside the region are
    /// projected onto it first).
    double operator()(const Eigen::VectorXd& x) const;

private:
    double coordinate(int axis, int i) const;

    StateSpace region_;
    double mesh_;
    Eigen::VectorXd lo_, hi_, spacing_;
    std::vector<int> npts_;
    std::vector<Eigen::Index> strides_;
    std::vector<double> values_;
    std::vector<char> inside_;
};

/// Largest grid difference quotient max |f(a)-f(b)| / |a-b| over inside-node
/// pairs: all pairs when there are at most 10^6 of them, otherwise a seeded
/// random subsample of 10^5 pairs (SplitMix64). A lower bound of the
/// continuum Lipschitz constant.
double empirical_lipschitz(const ValueFunction& f, std::uint64_t seed = 0);

}  // namespace lipdp
