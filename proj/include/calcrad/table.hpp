#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "calcrad/manifest.hpp"

namespace calcrad {

/// Subjects x named features, with per-subject label and contrast group.
struct FeatureTable {
    std::vector<std::string> subject_ids;
    std::vector<std::string> feature_names;
    Eigen::MatrixXd values;  // rows = subjects
    std::vector<CacLabel> labels;
    std::vector<ContrastGroup> groups;

    [[nodiscard]] Eigen::Index rows() const noexcept { return values.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return values.cols(); }

    /// Checks rectangularity, unique ids and unique column names.
    void validate() const;

    [[nodiscard]] Eigen::Index column_index(std::string_view name) const;
    [[nodiscard]] FeatureTable select_rows(const std::vector<Eigen::Index>& rows) const;
    [[nodiscard]] FeatureTable select_columns(const std::vector<std::string>& names) const;
    /// 1 for NonZero, 0 for Zero.
    [[nodiscard]] std::vector<int> label_vector() const;
};

/// Writes `subject_id,<names...>` with shortest round-trip number formatting.
void write_feature_csv(const FeatureTable& table, const std::filesystem::path& path);

/// Reads a feature CSV; labels and groups are left empty.
[[nodiscard]] FeatureTable read_feature_csv(const std::filesystem::path& path);

/// Keeps rows whose subject is in the manifest and fills labels/groups from it.
/// `missing` receives manifest ids absent from the table.
[[nodiscard]] FeatureTable join_manifest(const FeatureTable& table, const CohortManifest& manifest,
                                         std::vector<std::string>* missing = nullptr);

}  // namespace calcrad
