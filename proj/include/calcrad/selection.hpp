#pragma once

#include <string>
#include <vector>

#include "calcrad/table.hpp"

namespace calcrad::selection {

/// Greedy correlation filter. Zero-variance columns are dropped first; then, scanning in
/// column order, a feature is kept iff |pearson| with every kept feature is < threshold.
[[nodiscard]] std::vector<std::string> correlation_filter(const FeatureTable& table, double threshold);

/// Per-column mean and population standard deviation (0 replaced by 1).
struct Standardizer {
    std::vector<std::string> columns;
    std::vector<double> mean;
    std::vector<double> sd;

    [[nodiscard]] FeatureTable apply(const FeatureTable& table) const;
    [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

[[nodiscard]] Standardizer fit_standardizer(const FeatureTable& table, const std::vector<std::string>& columns);
[[nodiscard]] Standardizer fit_standardizer(const Eigen::MatrixXd& x, std::vector<std::string> columns);

}  // namespace calcrad::selection
