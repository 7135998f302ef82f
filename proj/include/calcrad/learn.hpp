#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "calcrad/manifest.hpp"
#include "calcrad/table.hpp"

namespace calcrad::learn {

using RowIndex = Eigen::Index;

struct Split {
    std::vector<RowIndex> train;
    std::vector<RowIndex> test;
};

/// Per-class stratified holdout. With `test_group`, only rows of that group are eligible
/// for the test set; all other rows go to training.
[[nodiscard]] Split stratified_split(const FeatureTable& table, double test_fraction, std::uint64_t seed,
                                     std::optional<ContrastGroup> test_group = std::nullopt);

/// k disjoint folds over positions 0..labels.size()-1, stratified by label.
[[nodiscard]] std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels, int k,
                                                                     std::uint64_t seed);

/// Training data: standardized or raw features, binary labels, column schema.
struct Dataset {
    Eigen::MatrixXd x;
    std::vector<int> y;
    std::vector<std::string> features;

    [[nodiscard]] Dataset subset(const std::vector<std::size_t>& rows) const;
};

enum class ModelKind { RandomForest, GradientBoostedTrees, LinearSvm, Mlp };

[[nodiscard]] std::string to_string(ModelKind k);
[[nodiscard]] ModelKind model_kind_from_string(const std::string& s);

/// Named hyperparameters; -1 for max_depth means unlimited.
using HyperParams = std::map<std::string, double>;

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf output
};

struct Tree {
    std::vector<TreeNode> nodes;
    [[nodiscard]] double eval(const double* row) const;
};

struct ForestParams {
    std::vector<Tree> trees;
    bool single_class = false;
};

struct BoostParams {
    double base_score = 0.0;
    double learning_rate = 0.1;
    std::vector<Tree> trees;
};

struct SvmParams {
    std::vector<double> mean, sd;
    std::vector<double> w;
    double b = 0.0;
    double platt_a = 1.0, platt_b = 0.0;  // score = sigmoid(a * margin + b)
};

struct MlpParams {
    std::vector<double> mean, sd;
    int hidden = 0;
    Eigen::MatrixXd w1;  // hidden x inputs
    Eigen::VectorXd b1;
    Eigen::VectorXd w2;  // hidden
    double b2 = 0.0;
};

using ModelParams = std::variant<ForestParams, BoostParams, SvmParams, MlpParams>;

struct TrainedModel {
    ModelKind kind = ModelKind::RandomForest;
    HyperParams hyper;
    std::vector<std::string> features;
    std::uint64_t seed = 0;
    ModelParams params;

    /// Stable hex digest of the serialized model.
    [[nodiscard]] std::string fingerprint() const;
};

struct Prediction {
    CacLabel label;
    double score;
};

[[nodiscard]] TrainedModel train(ModelKind kind, const Dataset& data, const HyperParams& hyper, std::uint64_t seed);
[[nodiscard]] std::vector<Prediction> predict(const TrainedModel& model, const Eigen::MatrixXd& x,
                                              const std::vector<std::string>& features);
[[nodiscard]] std::vector<double> predict_scores(const TrainedModel& model, const Eigen::MatrixXd& x);

[[nodiscard]] std::string to_json(const TrainedModel& model);
[[nodiscard]] TrainedModel from_json(const std::string& text);

// Gradient check support for the MLP: flat parameter layout is [w1 row-major, b1, w2, b2].
[[nodiscard]] Eigen::VectorXd mlp_flatten(const MlpParams& p);
[[nodiscard]] MlpParams mlp_unflatten(const Eigen::VectorXd& theta, int inputs, int hidden);
/// Mean cross-entropy over rows of already-standardized x; fills grad when non-null.
[[nodiscard]] double mlp_loss_and_gradient(const MlpParams& p, const Eigen::MatrixXd& x, const std::vector<int>& y,
                                           Eigen::VectorXd* grad);
[[nodiscard]] MlpParams mlp_init(int inputs, int hidden, std::uint64_t seed);

/// Ordered parameter axes; the grid is their Cartesian product, last axis fastest.
struct HyperGrid {
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    [[nodiscard]] std::vector<HyperParams> points() const;
};

[[nodiscard]] HyperGrid default_grid(const std::string& model_name);

struct GridResult {
    HyperParams best;
    std::vector<HyperParams> points;
    std::vector<std::optional<double>> cv_scores;  // empty when the point failed to train
    TrainedModel model;
};

[[nodiscard]] GridResult grid_search_cv(ModelKind kind, const Dataset& data, const HyperGrid& grid, int k,
                                        std::uint64_t seed);

/// Mean balanced accuracy of one hyperparameter point over the given folds.
[[nodiscard]] double cv_score(ModelKind kind, const Dataset& data, const HyperParams& hyper,
                              const std::vector<std::vector<std::size_t>>& folds, std::uint64_t seed);

}  // namespace calcrad::learn
