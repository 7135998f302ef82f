#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "calcrad/learn.hpp"
#include "calcrad/rng.hpp"
#include "errors.hpp"
#include "support.hpp"

using namespace calcrad;
using namespace calcrad::learn;

namespace {

const ModelKind kAllKinds[] = {ModelKind::RandomForest, ModelKind::GradientBoostedTrees, ModelKind::LinearSvm,
                               ModelKind::Mlp};

FeatureTable cohort(int zeros, int nonzeros, int noncontrast_every = 1) {
    FeatureTable t;
    t.feature_names = {"f"};
    t.values = Eigen::MatrixXd::Zero(zeros + nonzeros, 1);
    for (int i = 0; i < zeros + nonzeros; ++i) {
        t.subject_ids.push_back("s" + std::to_string(i));
        t.labels.push_back(i < zeros ? CacLabel::Zero : CacLabel::NonZero);
        t.groups.push_back(i % noncontrast_every == 0 ? ContrastGroup::NonContrast : ContrastGroup::Contrast);
        t.values(i, 0) = i;
    }
    return t;
}

Dataset blobs(int per_class, std::uint64_t seed, double gap = 8.0, int dims = 2) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n(0.0, 0.5);
    Dataset d;
    d.x.resize(2 * per_class, dims);
    for (int i = 0; i < 2 * per_class; ++i) {
        const int label = i % 2;
        d.y.push_back(label);
        for (int j = 0; j < dims; ++j) d.x(i, j) = (label ? gap : 0.0) + n(gen);
    }
    for (int j = 0; j < dims; ++j) d.features.push_back("x" + std::to_string(j));
    return d;
}

int count_label(const FeatureTable& t, const std::vector<RowIndex>& rows, CacLabel l) {
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [&](RowIndex r) { return t.labels[static_cast<std::size_t>(r)] == l; }));
}

double balanced_accuracy(const std::vector<int>& truth, const std::vector<Prediction>& pred) {
    double tp = 0, tn = 0, pos = 0, neg = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int p = pred[i].label == CacLabel::NonZero;
        if (truth[i]) {
            ++pos;
            tp += p;
        } else {
            ++neg;
            tn += 1 - p;
        }
    }
    return 0.5 * (tp / pos + tn / neg);
}

}  // namespace

TEST_CASE("stratified split") {
    const auto t = cohort(94, 88);
    const auto s = stratified_split(t, 0.2, 42);
    CHECK(std::abs(count_label(t, s.test, CacLabel::Zero) - 19) <= 1);
    CHECK(std::abs(count_label(t, s.test, CacLabel::NonZero) - 18) <= 1);
    CHECK(s.train.size() + s.test.size() == 182);
    std::set<RowIndex> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 182);

    const auto again = stratified_split(t, 0.2, 42);
    CHECK(again.train == s.train);
    CHECK(again.test == s.test);
    CHECK(stratified_split(t, 0.2, 43).test != s.test);

    const auto none = stratified_split(t, 0.0, 42);
    CHECK(none.test.empty());
    CHECK(none.train.size() == 182);

    CHECK(testing::code_of([&] { (void)stratified_split(t, 1.0, 1); }) == ErrorCode::BadRange);
    CHECK(testing::code_of([&] { (void)stratified_split(cohort(5, 0), 0.2, 1); }) == ErrorCode::SingleClass);
}

TEST_CASE("split restricted to one contrast group") {
    const auto t = cohort(40, 40, 2);
    const auto s = stratified_split(t, 0.25, 9, ContrastGroup::NonContrast);
    for (auto r : s.test) CHECK(t.groups[static_cast<std::size_t>(r)] == ContrastGroup::NonContrast);
    CHECK(s.test.size() == 10);
    CHECK(s.train.size() == 70);
}

TEST_CASE("stratified k-fold") {
    std::vector<int> y(20, 0);
    std::fill(y.begin() + 10, y.end(), 1);
    const auto folds = stratified_kfold(y, 5, 3);
    REQUIRE(folds.size() == 5);
    std::set<std::size_t> seen;
    for (const auto& f : folds) {
        int pos = 0;
        for (auto i : f) {
            pos += y[i];
            CHECK(seen.insert(i).second);
        }
        CHECK(f.size() == 4);
        CHECK(pos == 2);
    }
    CHECK(seen.size() == 20);
    CHECK(stratified_kfold(y, 5, 3) == folds);
    CHECK(testing::code_of([&] { (void)stratified_kfold(y, 11, 3); }) == ErrorCode::TooFewPerClass);
    CHECK(testing::code_of([&] { (void)stratified_kfold(y, 1, 3); }) == ErrorCode::BadRange);

    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 30; ++trial) {
        const int n0 = 3 + static_cast<int>(gen() % 20), n1 = 3 + static_cast<int>(gen() % 20);
        std::vector<int> labels(static_cast<std::size_t>(n0), 0);
        labels.insert(labels.end(), static_cast<std::size_t>(n1), 1);
        std::shuffle(labels.begin(), labels.end(), gen);
        const auto fs = stratified_kfold(labels, 3, gen());
        std::size_t total = 0;
        for (const auto& f : fs) {
            total += f.size();
            int pos = 0;
            for (auto i : f) pos += labels[i];
            CHECK(pos >= n1 / 3);
            CHECK(pos <= n1 / 3 + 1);
        }
        CHECK(total == labels.size());
    }
}

TEST_CASE("all kinds fit separable blobs") {
    const auto d = blobs(30, 11);
    for (auto kind : kAllKinds) {
        INFO(to_string(kind));
        HyperParams h;
        if (kind == ModelKind::Mlp) h = {{"hidden", 8}, {"learning_rate", 0.2}, {"epochs", 300}};
        const auto m = train(kind, d, h, 5);
        const auto pred = predict(m, d.x, d.features);
        for (std::size_t i = 0; i < pred.size(); ++i) {
            CHECK((pred[i].label == CacLabel::NonZero) == (d.y[i] == 1));
            CHECK(pred[i].score >= 0.0);
            CHECK(pred[i].score <= 1.0);
        }
    }
}

TEST_CASE("single unpruned tree fits any consistent training set") {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 20; ++trial) {
        Dataset d;
        d.x.resize(40, 3);
        for (int i = 0; i < 40; ++i) {
            for (int j = 0; j < 3; ++j) d.x(i, j) = static_cast<double>(gen() % 1000);
            d.y.push_back(static_cast<int>(gen() % 2));
        }
        if (std::count(d.y.begin(), d.y.end(), 1) == 0) d.y[0] = 1;
        d.features = {"a", "b", "c"};
        const auto m = train(ModelKind::RandomForest, d, {{"n_trees", 1}, {"max_depth", -1}, {"bootstrap", 0}}, gen());
        const auto p = predict(m, d.x, d.features);
        for (std::size_t i = 0; i < p.size(); ++i) CHECK((p[i].label == CacLabel::NonZero) == (d.y[i] == 1));
    }
}

TEST_CASE("duplicating a training point never lowers its forest score") {
    auto d = blobs(15, 21, 1.0);
    const HyperParams h{{"n_trees", 25}, {"max_depth", -1}, {"bootstrap", 0}};
    const auto base = train(ModelKind::RandomForest, d, h, 3);
    for (int i = 0; i < 6; ++i) {
        auto dup = d;
        dup.x.conservativeResize(d.x.rows() + 2, Eigen::NoChange);
        dup.x.row(d.x.rows()) = d.x.row(i);
        dup.x.row(d.x.rows() + 1) = d.x.row(i);
        dup.y.push_back(d.y[static_cast<std::size_t>(i)]);
        dup.y.push_back(d.y[static_cast<std::size_t>(i)]);
        const auto m = train(ModelKind::RandomForest, dup, h, 3);
        const Eigen::MatrixXd row = d.x.row(i);
        const double before = predict_scores(base, row)[0], after = predict_scores(m, row)[0];
        if (d.y[static_cast<std::size_t>(i)] == 1) CHECK(after >= before);
        else CHECK(after <= before);
    }
}

TEST_CASE("MLP gradient matches central differences") {
    std::mt19937_64 gen(8);
    std::normal_distribution<double> n;
    for (int draw = 0; draw < 20; ++draw) {
        const int inputs = 4, hidden = 5;
        Eigen::MatrixXd x(3, inputs);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < inputs; ++j) x(i, j) = n(gen);
        const std::vector<int> y{0, 1, static_cast<int>(gen() % 2)};
        const auto p = mlp_init(inputs, hidden, gen());
        Eigen::VectorXd grad;
        (void)mlp_loss_and_gradient(p, x, y, &grad);
        const Eigen::VectorXd theta = mlp_flatten(p);
        REQUIRE(grad.size() == theta.size());
        double worst = 0.0;
        for (Eigen::Index k = 0; k < theta.size(); ++k) {
            const double h = 1e-6;
            Eigen::VectorXd tp = theta, tm = theta;
            tp(k) += h;
            tm(k) -= h;
            const double fd = (mlp_loss_and_gradient(mlp_unflatten(tp, inputs, hidden), x, y, nullptr) -
                               mlp_loss_and_gradient(mlp_unflatten(tm, inputs, hidden), x, y, nullptr)) /
                              (2 * h);
            const double denom = std::max({std::abs(fd), std::abs(grad(k)), 1e-8});
            worst = std::max(worst, std::abs(fd - grad(k)) / denom);
        }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("hyperparameter grid") {
    HyperGrid g{{{"a", {1, 2}}, {"b", {10, 20, 30}}}};
    const auto pts = g.points();
    REQUIRE(pts.size() == 6);
    CHECK(pts[0] == HyperParams{{"a", 1}, {"b", 10}});
    CHECK(pts[1] == HyperParams{{"a", 1}, {"b", 20}});
    CHECK(pts[5] == HyperParams{{"a", 2}, {"b", 30}});
    for (const char* name : {"random_forest", "xgboost", "lightgbm", "linear_svm", "mlp"}) {
        const auto n = default_grid(name).points().size();
        CHECK(n >= 1);
        CHECK(n <= 12);
    }
    CHECK(model_kind_from_string("xgboost") == ModelKind::GradientBoostedTrees);
    CHECK(model_kind_from_string("lightgbm") == ModelKind::GradientBoostedTrees);
    CHECK(model_kind_from_string(to_string(ModelKind::Mlp)) == ModelKind::Mlp);
}

TEST_CASE("grid search") {
    const auto d = blobs(20, 13, 1.5);
    SUBCASE("one point wins") {
        const auto r = grid_search_cv(ModelKind::RandomForest, d, HyperGrid{{{"n_trees", {7}}}}, 5, 1);
        CHECK(r.best == HyperParams{{"n_trees", 7}});
    }
    SUBCASE("degenerate point loses") {
        const auto r = grid_search_cv(ModelKind::RandomForest, d, HyperGrid{{{"n_trees", {0, 10}}}}, 5, 1);
        CHECK(r.best.at("n_trees") == 10);
        CHECK_FALSE(r.cv_scores[0].has_value());
        CHECK(r.cv_scores[1].has_value());
    }
    SUBCASE("CV scores replay under an independent fold loop") {
        const std::uint64_t seed = 77;
        const auto grid = default_grid("gbt");
        const auto r = grid_search_cv(ModelKind::GradientBoostedTrees, d, grid, 4, seed);
        const auto folds = stratified_kfold(d.y, 4, derive_seed(seed, 0));
        const auto pts = grid.points();
        for (std::size_t p = 0; p < pts.size(); ++p) {
            double sum = 0;
            for (std::size_t f = 0; f < folds.size(); ++f) {
                std::vector<std::size_t> train_rows;
                for (std::size_t g = 0; g < folds.size(); ++g)
                    if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
                const auto tr = d.subset(train_rows), te = d.subset(folds[f]);
                const auto m = train(ModelKind::GradientBoostedTrees, tr, pts[p], derive_seed(derive_seed(seed, 1), f));
                sum += balanced_accuracy(te.y, predict(m, te.x, te.features));
            }
            REQUIRE(r.cv_scores[p].has_value());
            CHECK(*r.cv_scores[p] == doctest::Approx(sum / static_cast<double>(folds.size())).epsilon(1e-12));
        }
        const auto again = grid_search_cv(ModelKind::GradientBoostedTrees, d, grid, 4, seed);
        CHECK(again.best == r.best);
        CHECK(again.model.fingerprint() == r.model.fingerprint());
    }
}

TEST_CASE("prediction contracts") {
    const auto d = blobs(10, 4);
    for (auto kind : kAllKinds) {
        INFO(to_string(kind));
        const auto m = train(kind, d, {}, 2);
        Eigen::MatrixXd dup(2, 2);
        dup.row(0) = d.x.row(3);
        dup.row(1) = d.x.row(3);
        const auto p = predict(m, dup, d.features);
        CHECK(p[0].score == p[1].score);
        CHECK(p[0].label == p[1].label);

        Eigen::MatrixXd bad = dup;
        bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK(testing::code_of([&] { (void)predict(m, bad, d.features); }) == ErrorCode::NonFiniteFeature);
        CHECK(testing::code_of([&] { (void)predict(m, dup, {"x1", "x0"}); }) == ErrorCode::SchemaMismatch);

        const auto back = from_json(to_json(m));
        CHECK(back.fingerprint() == m.fingerprint());
        CHECK(predict_scores(back, d.x) == predict_scores(m, d.x));
        CHECK(train(kind, d, {}, 2).fingerprint() == m.fingerprint());
    }
}

TEST_CASE("training errors") {
    auto d = blobs(5, 1);
    CHECK(testing::code_of([&] { (void)train(ModelKind::RandomForest, d, {{"n_trees", 0}}, 1); }) ==
          ErrorCode::InvalidHyperparameter);
    auto one = d;
    std::fill(one.y.begin(), one.y.end(), 0);
    CHECK(testing::code_of([&] { (void)train(ModelKind::LinearSvm, one, {}, 1); }) == ErrorCode::SingleClass);
    auto nan = d;
    nan.x(0, 0) = std::numeric_limits<double>::infinity();
    CHECK(testing::code_of([&] { (void)train(ModelKind::Mlp, nan, {}, 1); }) == ErrorCode::NonFiniteFeature);
}

TEST_CASE("SVM is invariant to uniform rescaling of raw features") {
    const auto d = blobs(20, 6, 2.0, 3);
    auto scaled = d;
    scaled.x *= 37.5;
    const auto a = train(ModelKind::LinearSvm, d, {}, 9);
    const auto b = train(ModelKind::LinearSvm, scaled, {}, 9);
    const auto pa = predict(a, d.x, d.features), pb = predict(b, scaled.x, scaled.features);
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i].label == pb[i].label);
        CHECK(pa[i].score == doctest::Approx(pb[i].score).epsilon(1e-6));
    }
}

TEST_CASE("rng streams") {
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    Rng c(6);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(c.below(7) < 7);
    }
}
