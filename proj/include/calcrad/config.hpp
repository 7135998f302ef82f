#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "calcrad/features.hpp"
#include "calcrad/learn.hpp"

namespace calcrad {

enum class RunMode { Radiomics, Embeddings };
enum class TrainComposition { Mixed, NonContrastOnly };

[[nodiscard]] std::string to_string(RunMode m);
[[nodiscard]] std::string to_string(TrainComposition c);
[[nodiscard]] RunMode run_mode_from_string(std::string_view s);
[[nodiscard]] TrainComposition composition_from_string(std::string_view s);

/// Flat `key = value` run configuration. Lines starting with '#' are comments.
struct RunConfig {
    std::string text;  // source document, echoed verbatim in reports
    std::filesystem::path manifest;
    std::filesystem::path features;
    std::filesystem::path embeddings;
    RunMode mode = RunMode::Radiomics;
    TrainComposition composition = TrainComposition::Mixed;
    features::ExtractionConfig extraction;
    double selection_threshold = 0.9;
    bool embedding_selection = false;
    std::string embedding_provenance;
    std::vector<std::string> models{"random_forest", "gbt", "linear_svm", "mlp"};
    std::map<std::string, std::map<std::string, std::vector<double>>> grid_overrides;
    std::uint64_t seed = 42;
    int n_seeds = 1;
    double test_fraction = 0.2;
    int cv_folds = 5;
    bool shuffle_labels = false;

    /// Default grid for the model with any `grid.<model>.<param>` overrides applied.
    [[nodiscard]] learn::HyperGrid grid_for(const std::string& model) const;
};

/// Relative paths resolve against `base_dir`. Unknown keys and bad values throw ConfigError.
[[nodiscard]] RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

}  // namespace calcrad
