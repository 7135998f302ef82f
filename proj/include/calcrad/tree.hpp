#pragma once

#include <Eigen/Dense>

#include <vector>

#include "calcrad/learn.hpp"
#include "calcrad/rng.hpp"

namespace calcrad::learn {

/// Classification tree minimizing weighted Gini impurity. Leaves hold the majority vote
/// (1 when the positive weight share is >= 0.5). max_depth < 0 means unlimited.
[[nodiscard]] Tree build_gini_tree(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                   const std::vector<double>& weights, const std::vector<std::size_t>& rows,
                                   int max_depth, int mtry, Rng& rng);

struct NewtonTreeOptions {
    int max_depth = 3;
    double lambda = 1.0;
    double min_child_weight = 1.0;
};

/// Second-order regression tree: leaf weight -G/(H+lambda), split gain from the same score.
[[nodiscard]] Tree build_newton_tree(const Eigen::MatrixXd& x, const std::vector<double>& grad,
                                     const std::vector<double>& hess, const NewtonTreeOptions& options);

}  // namespace calcrad::learn
