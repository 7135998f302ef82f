#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "calcrad/manifest.hpp"
#include "calcrad/table.hpp"

namespace calcrad::embeddings {

struct EmbeddingTable {
    std::vector<std::string> subject_ids;
    std::size_t dimension = 0;
    Eigen::MatrixXd values;  // subjects x dimension
    std::string provenance;
};

/// Reads `subject_id,e0,...,e{D-1}`. Provenance defaults to "ctfm-<D>".
[[nodiscard]] EmbeddingTable load_embeddings(const std::filesystem::path& path, std::string provenance = {});

void write_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);

/// Per-dimension arithmetic mean.
[[nodiscard]] std::vector<double> average_slices(const std::vector<std::vector<double>>& slices);

/// Converts to a FeatureTable with columns e0..e{D-1}.
[[nodiscard]] FeatureTable to_feature_table(const EmbeddingTable& table);

struct JoinResult {
    FeatureTable table;               // manifest ∩ embeddings, in manifest order
    std::vector<std::string> missing; // manifest ids without an embedding
    std::size_t coverage = 0;
};

[[nodiscard]] JoinResult join(const EmbeddingTable& table, const CohortManifest& manifest);

}  // namespace calcrad::embeddings
