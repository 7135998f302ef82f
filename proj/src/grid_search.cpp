#include <algorithm>
#include <cmath>

#include "calcrad/error.hpp"
#include "calcrad/learn.hpp"
#include "calcrad/rng.hpp"

namespace calcrad::learn {

std::vector<HyperParams> HyperGrid::points() const {
    std::vector<HyperParams> out{HyperParams{}};
    for (const auto& [name, values] : axes) {
        if (values.empty()) throw Error(ErrorCode::InvalidHyperparameter, "grid axis " + name + " is empty");
        std::vector<HyperParams> next;
        for (const auto& base : out) {
            for (const double v : values) {
                HyperParams p = base;
                p[name] = v;
                next.push_back(std::move(p));
            }
        }
        out = std::move(next);
    }
    return out;
}

HyperGrid default_grid(const std::string& model_name) {
    HyperGrid g;
    if (model_name == "random_forest") {
        g.axes = {{"n_trees", {50, 150}}, {"max_depth", {4, 8, -1}}};
    } else if (model_name == "gbt" || model_name == "xgboost") {
        g.axes = {{"n_rounds", {50, 150}}, {"learning_rate", {0.1, 0.3}}, {"max_depth", {2, 3}}};
    } else if (model_name == "lightgbm") {
        g.axes = {{"n_rounds", {100, 200}}, {"learning_rate", {0.05, 0.1}}, {"max_depth", {4, 6}}};
    } else if (model_name == "linear_svm") {
        g.axes = {{"lambda", {1e-3, 1e-2, 1e-1}}, {"epochs", {50, 200}}};
    } else if (model_name == "mlp") {
        g.axes = {{"hidden", {8, 16}}, {"learning_rate", {0.05, 0.2}}, {"epochs", {300}}};
    } else {
        throw Error(ErrorCode::ConfigError, "unknown model: " + model_name);
    }
    return g;
}

namespace {

double balanced_accuracy(const std::vector<int>& truth, const std::vector<double>& scores) {
    double tp = 0, fn = 0, tn = 0, fp = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool pred = scores[i] >= 0.5;
        if (truth[i]) (pred ? tp : fn) += 1;
        else (pred ? fp : tn) += 1;
    }
    const bool has_pos = tp + fn > 0, has_neg = tn + fp > 0;
    if (has_pos && has_neg) return 0.5 * (tp / (tp + fn) + tn / (tn + fp));
    return has_pos ? tp / (tp + fn) : tn / (tn + fp);
}

}  // namespace

double cv_score(ModelKind kind, const Dataset& data, const HyperParams& hyper,
                const std::vector<std::vector<std::size_t>>& folds, std::uint64_t seed) {
    double total = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train_rows;
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(train_rows.begin(), train_rows.end());
        const Dataset tr = data.subset(train_rows);
        const Dataset va = data.subset(folds[f]);
        const TrainedModel m = train(kind, tr, hyper, derive_seed(seed, f));
        total += balanced_accuracy(va.y, predict_scores(m, va.x));
    }
    return total / static_cast<double>(folds.size());
}

GridResult grid_search_cv(ModelKind kind, const Dataset& data, const HyperGrid& grid, int k, std::uint64_t seed) {
    GridResult r;
    r.points = grid.points();
    if (r.points.empty()) throw Error(ErrorCode::InvalidHyperparameter, "empty grid");
    const auto folds = stratified_kfold(data.y, k, derive_seed(seed, 0));
    const std::uint64_t fold_seed = derive_seed(seed, 1);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        std::optional<double> score;
        try {
            score = cv_score(kind, data, r.points[i], folds, fold_seed);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InvalidHyperparameter) throw;
        }
        r.cv_scores.push_back(score);
        if (score && (!best || *score > *r.cv_scores[*best])) best = i;
    }
    if (!best) throw Error(ErrorCode::InvalidHyperparameter, "no valid grid point");
    r.best = r.points[*best];
    r.model = train(kind, data, r.best, derive_seed(seed, 2));
    return r;
}

}  // namespace calcrad::learn
