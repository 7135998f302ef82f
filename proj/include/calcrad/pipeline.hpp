#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "calcrad/config.hpp"
#include "calcrad/table.hpp"

namespace calcrad::pipeline {

struct Exclusion {
    std::string subject_id;
    std::string reason;
};

struct ExtractResult {
    FeatureTable table;  // sorted by subject id
    std::vector<Exclusion> excluded;
};

/// Extracts features for every manifest subject. Per-subject failures are recorded and
/// skipped; throws EmptyCohort when nothing could be extracted.
[[nodiscard]] ExtractResult extract_cohort(const RunConfig& config);

/// Runs extract_cohort and writes features.csv and extraction_report.json into out_dir.
ExtractResult cmd_extract(const RunConfig& config, const std::filesystem::path& out_dir);

/// Labelled input for training: features or embeddings joined with the manifest.
struct Cohort {
    FeatureTable table;
    std::vector<Exclusion> excluded;
    std::string provenance;
};

[[nodiscard]] Cohort load_cohort(const RunConfig& config);

/// One seeded split -> select -> standardize -> grid search -> test evaluation pass.
[[nodiscard]] nlohmann::json run_once(const RunConfig& config, const FeatureTable& table, std::uint64_t run_seed);

/// Seed for run i under the master seed.
[[nodiscard]] std::uint64_t run_seed(std::uint64_t master, int index);

/// Full report without timing; covers config.n_seeds runs.
[[nodiscard]] nlohmann::json train_eval(const RunConfig& config, const Cohort& cohort);

/// Writes report.json (with a timing block) and metrics.csv into out_dir.
nlohmann::json cmd_train_eval(const RunConfig& config, const std::filesystem::path& out_dir);

/// Rows: model,seed,accuracy,balanced_accuracy,sensitivity,specificity,ppv,f1,npv.
[[nodiscard]] std::string metrics_csv(const nlohmann::json& report);

/// Paired t-tests on per-seed balanced accuracy and F1 for every model present in both reports.
[[nodiscard]] nlohmann::json cmd_stats(const nlohmann::json& a, const nlohmann::json& b);
[[nodiscard]] std::string format_stats(const nlohmann::json& stats);

/// Runs both configurations over the same n_seeds run seeds and compares them.
[[nodiscard]] nlohmann::json paired_runs(const RunConfig& a, const RunConfig& b, int n_seeds);

/// The 107-column schema as CSV: index,column,family,formula.
[[nodiscard]] std::string catalog_csv();

[[nodiscard]] nlohmann::json load_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Report copy without timing fields, for reproducibility comparisons.
[[nodiscard]] nlohmann::json strip_timing(nlohmann::json report);

}  // namespace calcrad::pipeline
