#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "calcrad/error.hpp"
#include "calcrad/learn.hpp"
#include "calcrad/rng.hpp"
#include "calcrad/tree.hpp"

namespace calcrad::learn {

using nlohmann::json;

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::RandomForest: return "random_forest";
        case ModelKind::GradientBoostedTrees: return "gbt";
        case ModelKind::LinearSvm: return "linear_svm";
        case ModelKind::Mlp: return "mlp";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "random_forest") return ModelKind::RandomForest;
    if (s == "gbt" || s == "xgboost" || s == "lightgbm") return ModelKind::GradientBoostedTrees;
    if (s == "linear_svm") return ModelKind::LinearSvm;
    if (s == "mlp") return ModelKind::Mlp;
    throw Error(ErrorCode::ConfigError, "unknown model: " + s);
}

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double param(const HyperParams& h, const std::string& name, double fallback) {
    const auto it = h.find(name);
    return it == h.end() ? fallback : it->second;
}

int int_param(const HyperParams& h, const std::string& name, double fallback) {
    const double v = param(h, name, fallback);
    if (!std::isfinite(v) || v != std::floor(v)) throw Error(ErrorCode::InvalidHyperparameter, name + " must be an integer");
    return static_cast<int>(v);
}

void check_finite(const Eigen::MatrixXd& x) {
    if (!x.allFinite()) throw Error(ErrorCode::NonFiniteFeature, "feature matrix contains non-finite values");
}

bool both_classes(const std::vector<int>& y) {
    const bool pos = std::any_of(y.begin(), y.end(), [](int v) { return v != 0; });
    const bool neg = std::any_of(y.begin(), y.end(), [](int v) { return v == 0; });
    return pos && neg;
}

void column_stats(const Eigen::MatrixXd& x, std::vector<double>& mean, std::vector<double>& sd) {
    mean.assign(static_cast<std::size_t>(x.cols()), 0.0);
    sd.assign(static_cast<std::size_t>(x.cols()), 1.0);
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double m = x.col(c).mean();
        const double s = std::sqrt((x.col(c).array() - m).square().mean());
        mean[static_cast<std::size_t>(c)] = m;
        sd[static_cast<std::size_t>(c)] = s > 0 ? s : 1.0;
    }
}

Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const std::vector<double>& mean, const std::vector<double>& sd) {
    Eigen::MatrixXd z(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        z.col(c) = (x.col(c).array() - mean[static_cast<std::size_t>(c)]) / sd[static_cast<std::size_t>(c)];
    }
    return z;
}

ForestParams train_forest(const Dataset& d, const HyperParams& h, std::uint64_t seed) {
    const int n_trees = int_param(h, "n_trees", 100);
    const int max_depth = int_param(h, "max_depth", -1);
    const int bootstrap = int_param(h, "bootstrap", 1);
    if (n_trees < 1) throw Error(ErrorCode::InvalidHyperparameter, "n_trees must be >= 1");
    if (max_depth < -1 || max_depth == 0) throw Error(ErrorCode::InvalidHyperparameter, "max_depth must be >= 1 or -1");
    const int mtry = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d.x.cols())))));
    const auto n = static_cast<std::size_t>(d.x.rows());

    ForestParams p;
    p.single_class = !both_classes(d.y);
    for (int t = 0; t < n_trees; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<double> w(n, bootstrap ? 0.0 : 1.0);
        if (bootstrap) {
            for (std::size_t i = 0; i < n; ++i) w[static_cast<std::size_t>(rng.below(n))] += 1.0;
        }
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (w[i] > 0) rows.push_back(i);
        }
        p.trees.push_back(build_gini_tree(d.x, d.y, w, rows, max_depth, mtry, rng));
    }
    return p;
}

BoostParams train_boost(const Dataset& d, const HyperParams& h) {
    const int rounds = int_param(h, "n_rounds", 100);
    const double lr = param(h, "learning_rate", 0.1);
    NewtonTreeOptions opt;
    opt.max_depth = int_param(h, "max_depth", 3);
    opt.lambda = param(h, "lambda", 1.0);
    opt.min_child_weight = param(h, "min_child_weight", 1.0);
    if (rounds < 1) throw Error(ErrorCode::InvalidHyperparameter, "n_rounds must be >= 1");
    if (!(lr > 0 && lr <= 1)) throw Error(ErrorCode::InvalidHyperparameter, "learning_rate must be in (0, 1]");
    if (opt.max_depth < 1) throw Error(ErrorCode::InvalidHyperparameter, "max_depth must be >= 1");
    if (!(opt.lambda >= 0) || !(opt.min_child_weight >= 0)) throw Error(ErrorCode::InvalidHyperparameter, "lambda");

    const auto n = static_cast<std::size_t>(d.x.rows());
    const double prior = std::accumulate(d.y.begin(), d.y.end(), 0.0) / static_cast<double>(n);
    BoostParams p;
    p.learning_rate = lr;
    p.base_score = std::log(prior / (1.0 - prior));
    std::vector<double> f(n, p.base_score), g(n), hs(n);
    for (int r = 0; r < rounds; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const double pi = sigmoid(f[i]);
            g[i] = pi - d.y[i];
            hs[i] = std::max(pi * (1.0 - pi), 1e-16);
        }
        Tree t = build_newton_tree(d.x, g, hs, opt);
        for (auto& node : t.nodes) node.value *= lr;
        for (std::size_t i = 0; i < n; ++i) f[i] += t.eval(d.x.row(static_cast<Eigen::Index>(i)).data());
        p.trees.push_back(std::move(t));
    }
    return p;
}

// Single-scale logistic link on margins, fitted to smoothed targets; a stays positive so
// the decision boundary is the margin sign.
double fit_margin_scale(const std::vector<double>& m, const std::vector<int>& y) {
    const double n_pos = std::count(y.begin(), y.end(), 1);
    const double n_neg = static_cast<double>(y.size()) - n_pos;
    const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
    const double t_neg = 1.0 / (n_neg + 2.0);
    double a = 1.0;
    for (int it = 0; it < 100; ++it) {
        double g = 0.0, h = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double t = y[i] ? t_pos : t_neg;
            const double p = sigmoid(a * m[i]);
            g += (p - t) * m[i];
            h += p * (1.0 - p) * m[i] * m[i];
        }
        const double step = g / (h + 1e-12);
        a = std::clamp(a - step, 1e-3, 1e3);
        if (std::abs(step) < 1e-10) break;
    }
    return a;
}

Eigen::VectorXd row_vec(const Eigen::MatrixXd& x, Eigen::Index r) { return x.row(r).transpose(); }

SvmParams train_svm(const Dataset& d, const HyperParams& h, std::uint64_t seed) {
    const double lambda = param(h, "lambda", 1e-2);
    const int epochs = int_param(h, "epochs", 100);
    if (!(lambda > 0)) throw Error(ErrorCode::InvalidHyperparameter, "lambda must be > 0");
    if (epochs < 1) throw Error(ErrorCode::InvalidHyperparameter, "epochs must be >= 1");
    if (!both_classes(d.y)) throw Error(ErrorCode::SingleClass, "linear_svm needs both classes");

    SvmParams p;
    column_stats(d.x, p.mean, p.sd);
    const Eigen::MatrixXd z = standardize(d.x, p.mean, p.sd);
    const auto n = static_cast<std::size_t>(z.rows());
    const Eigen::Index dim = z.cols();
    // Pegasos on inputs augmented with a constant 1 (regularized bias).
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim + 1);
    const double radius = 1.0 / std::sqrt(lambda);
    Rng rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::uint64_t t = 0;
    for (int e = 0; e < epochs; ++e) {
        rng.shuffle(order);
        for (const auto i : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double yi = d.y[i] ? 1.0 : -1.0;
            const double margin = yi * (w.head(dim).dot(row_vec(z, static_cast<Eigen::Index>(i))) + w[dim]);
            w *= 1.0 - eta * lambda;
            if (margin < 1.0) {
                w.head(dim) += eta * yi * row_vec(z, static_cast<Eigen::Index>(i));
                w[dim] += eta * yi;
            }
            const double norm = w.norm();
            if (norm > radius) w *= radius / norm;
        }
    }
    p.w.assign(w.data(), w.data() + dim);
    p.b = w[dim];
    std::vector<double> margins(n);
    for (std::size_t i = 0; i < n; ++i) margins[i] = w.head(dim).dot(row_vec(z, static_cast<Eigen::Index>(i))) + p.b;
    p.platt_a = fit_margin_scale(margins, d.y);
    p.platt_b = 0.0;
    return p;
}

Eigen::VectorXd mlp_logits(const MlpParams& p, const Eigen::MatrixXd& z, Eigen::MatrixXd* hidden_out) {
    Eigen::MatrixXd pre = z * p.w1.transpose();
    pre.rowwise() += p.b1.transpose();
    Eigen::MatrixXd act = pre.cwiseMax(0.0);
    Eigen::VectorXd out = act * p.w2;
    out.array() += p.b2;
    if (hidden_out) *hidden_out = std::move(pre);
    return out;
}

MlpParams train_mlp(const Dataset& d, const HyperParams& h, std::uint64_t seed) {
    const int hidden = int_param(h, "hidden", 16);
    const double lr = param(h, "learning_rate", 0.1);
    const int epochs = int_param(h, "epochs", 300);
    if (hidden < 1) throw Error(ErrorCode::InvalidHyperparameter, "hidden must be >= 1");
    if (!(lr > 0)) throw Error(ErrorCode::InvalidHyperparameter, "learning_rate must be > 0");
    if (epochs < 1) throw Error(ErrorCode::InvalidHyperparameter, "epochs must be >= 1");
    if (!both_classes(d.y)) throw Error(ErrorCode::SingleClass, "mlp needs both classes");

    const int inputs = static_cast<int>(d.x.cols());
    MlpParams p = mlp_init(inputs, hidden, seed);
    column_stats(d.x, p.mean, p.sd);
    const Eigen::MatrixXd z = standardize(d.x, p.mean, p.sd);
    Eigen::VectorXd theta = mlp_flatten(p);
    Eigen::VectorXd grad;
    for (int e = 0; e < epochs; ++e) {
        (void)mlp_loss_and_gradient(mlp_unflatten(theta, inputs, hidden), z, d.y, &grad);
        theta -= lr * grad;
    }
    MlpParams out = mlp_unflatten(theta, inputs, hidden);
    out.mean = p.mean;
    out.sd = p.sd;
    return out;
}

json tree_to_json(const Tree& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    return nodes;
}

Tree tree_from_json(const json& j) {
    Tree t;
    for (const auto& n : j) {
        t.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(), n.at(3).get<int>(),
                           n.at(4).get<double>()});
    }
    return t;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

MlpParams mlp_init(int inputs, int hidden, std::uint64_t seed) {
    MlpParams p;
    p.hidden = hidden;
    Rng rng(seed);
    const double l1 = std::sqrt(6.0 / (inputs + hidden));
    const double l2 = std::sqrt(6.0 / (hidden + 1));
    p.w1.resize(hidden, inputs);
    for (int i = 0; i < hidden; ++i) {
        for (int j = 0; j < inputs; ++j) p.w1(i, j) = rng.uniform(-l1, l1);
    }
    p.b1 = Eigen::VectorXd::Zero(hidden);
    p.w2.resize(hidden);
    for (int i = 0; i < hidden; ++i) p.w2[i] = rng.uniform(-l2, l2);
    p.b2 = 0.0;
    p.mean.assign(static_cast<std::size_t>(inputs), 0.0);
    p.sd.assign(static_cast<std::size_t>(inputs), 1.0);
    return p;
}

Eigen::VectorXd mlp_flatten(const MlpParams& p) {
    const Eigen::Index h = p.w1.rows(), in = p.w1.cols();
    Eigen::VectorXd theta(h * in + 2 * h + 1);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < h; ++i) {
        for (Eigen::Index j = 0; j < in; ++j) theta[k++] = p.w1(i, j);
    }
    for (Eigen::Index i = 0; i < h; ++i) theta[k++] = p.b1[i];
    for (Eigen::Index i = 0; i < h; ++i) theta[k++] = p.w2[i];
    theta[k] = p.b2;
    return theta;
}

MlpParams mlp_unflatten(const Eigen::VectorXd& theta, int inputs, int hidden) {
    if (theta.size() != static_cast<Eigen::Index>(hidden) * inputs + 2 * hidden + 1) {
        throw Error(ErrorCode::DimMismatch, "mlp parameter vector size");
    }
    MlpParams p;
    p.hidden = hidden;
    p.w1.resize(hidden, inputs);
    p.b1.resize(hidden);
    p.w2.resize(hidden);
    Eigen::Index k = 0;
    for (int i = 0; i < hidden; ++i) {
        for (int j = 0; j < inputs; ++j) p.w1(i, j) = theta[k++];
    }
    for (int i = 0; i < hidden; ++i) p.b1[i] = theta[k++];
    for (int i = 0; i < hidden; ++i) p.w2[i] = theta[k++];
    p.b2 = theta[k];
    p.mean.assign(static_cast<std::size_t>(inputs), 0.0);
    p.sd.assign(static_cast<std::size_t>(inputs), 1.0);
    return p;
}

double mlp_loss_and_gradient(const MlpParams& p, const Eigen::MatrixXd& x, const std::vector<int>& y,
                             Eigen::VectorXd* grad) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd pre;
    const Eigen::VectorXd logits = mlp_logits(p, x, &pre);
    double loss = 0.0;
    Eigen::VectorXd dz(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double yi = y[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
        loss += softplus(logits[i]) - yi * logits[i];
        dz[i] = (sigmoid(logits[i]) - yi) / static_cast<double>(n);
    }
    loss /= static_cast<double>(n);
    if (grad) {
        const Eigen::MatrixXd act = pre.cwiseMax(0.0);
        MlpParams g;
        g.w2 = act.transpose() * dz;
        g.b2 = dz.sum();
        Eigen::MatrixXd dpre = dz * p.w2.transpose();  // n x h
        dpre.array() *= (pre.array() > 0.0).cast<double>();
        g.w1 = dpre.transpose() * x;
        g.b1 = dpre.colwise().sum().transpose();
        *grad = mlp_flatten(g);
    }
    return loss;
}

TrainedModel train(ModelKind kind, const Dataset& data, const HyperParams& hyper, std::uint64_t seed) {
    if (data.x.rows() < 2) throw Error(ErrorCode::TooFewRows, "training needs >= 2 rows");
    if (static_cast<std::size_t>(data.x.rows()) != data.y.size() ||
        static_cast<std::size_t>(data.x.cols()) != data.features.size()) {
        throw Error(ErrorCode::DimMismatch, "dataset shape");
    }
    check_finite(data.x);
    TrainedModel m;
    m.kind = kind;
    m.hyper = hyper;
    m.features = data.features;
    m.seed = seed;
    switch (kind) {
        case ModelKind::RandomForest: m.params = train_forest(data, hyper, seed); break;
        case ModelKind::GradientBoostedTrees:
            if (!both_classes(data.y)) throw Error(ErrorCode::SingleClass, "gbt needs both classes");
            m.params = train_boost(data, hyper);
            break;
        case ModelKind::LinearSvm: m.params = train_svm(data, hyper, seed); break;
        case ModelKind::Mlp: m.params = train_mlp(data, hyper, seed); break;
    }
    return m;
}

std::vector<double> predict_scores(const TrainedModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != static_cast<Eigen::Index>(model.features.size())) throw Error(ErrorCode::SchemaMismatch, "column count");
    check_finite(x);
    std::vector<double> s(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const Eigen::RowVectorXd row = x.row(r);
        double score = 0.0;
        if (const auto* f = std::get_if<ForestParams>(&model.params)) {
            double votes = 0.0;
            for (const auto& t : f->trees) votes += t.eval(row.data());
            score = votes / static_cast<double>(f->trees.size());
        } else if (const auto* b = std::get_if<BoostParams>(&model.params)) {
            double z = b->base_score;
            for (const auto& t : b->trees) z += t.eval(row.data());
            score = sigmoid(z);
        } else if (const auto* v = std::get_if<SvmParams>(&model.params)) {
            double m = v->b;
            for (std::size_t c = 0; c < v->w.size(); ++c) m += v->w[c] * (row[static_cast<Eigen::Index>(c)] - v->mean[c]) / v->sd[c];
            score = sigmoid(v->platt_a * m + v->platt_b);
        } else if (const auto* p = std::get_if<MlpParams>(&model.params)) {
            Eigen::MatrixXd z(1, row.size());
            for (Eigen::Index c = 0; c < row.size(); ++c) {
                z(0, c) = (row[c] - p->mean[static_cast<std::size_t>(c)]) / p->sd[static_cast<std::size_t>(c)];
            }
            score = sigmoid(mlp_logits(*p, z, nullptr)[0]);
        }
        s[static_cast<std::size_t>(r)] = score;
    }
    return s;
}

std::vector<Prediction> predict(const TrainedModel& model, const Eigen::MatrixXd& x,
                                const std::vector<std::string>& features) {
    if (features != model.features) throw Error(ErrorCode::SchemaMismatch, "feature columns differ from training schema");
    std::vector<Prediction> out;
    for (const double s : predict_scores(model, x)) out.push_back({s >= 0.5 ? CacLabel::NonZero : CacLabel::Zero, s});
    return out;
}

std::string to_json(const TrainedModel& model) {
    json j;
    j["kind"] = to_string(model.kind);
    j["hyperparameters"] = model.hyper;
    j["features"] = model.features;
    j["seed"] = model.seed;
    json p;
    if (const auto* f = std::get_if<ForestParams>(&model.params)) {
        p["single_class"] = f->single_class;
        p["trees"] = json::array();
        for (const auto& t : f->trees) p["trees"].push_back(tree_to_json(t));
    } else if (const auto* b = std::get_if<BoostParams>(&model.params)) {
        p["base_score"] = b->base_score;
        p["learning_rate"] = b->learning_rate;
        p["trees"] = json::array();
        for (const auto& t : b->trees) p["trees"].push_back(tree_to_json(t));
    } else if (const auto* v = std::get_if<SvmParams>(&model.params)) {
        p["mean"] = v->mean;
        p["sd"] = v->sd;
        p["w"] = v->w;
        p["b"] = v->b;
        p["platt_a"] = v->platt_a;
        p["platt_b"] = v->platt_b;
    } else if (const auto* m = std::get_if<MlpParams>(&model.params)) {
        p["mean"] = m->mean;
        p["sd"] = m->sd;
        p["hidden"] = m->hidden;
        p["w1"] = matrix_to_json(m->w1);
        p["b1"] = std::vector<double>(m->b1.data(), m->b1.data() + m->b1.size());
        p["w2"] = std::vector<double>(m->w2.data(), m->w2.data() + m->w2.size());
        p["b2"] = m->b2;
    }
    j["parameters"] = p;
    return j.dump();
}

TrainedModel from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        TrainedModel m;
        m.kind = model_kind_from_string(j.at("kind").get<std::string>());
        m.hyper = j.at("hyperparameters").get<HyperParams>();
        m.features = j.at("features").get<std::vector<std::string>>();
        m.seed = j.at("seed").get<std::uint64_t>();
        const json& p = j.at("parameters");
        switch (m.kind) {
            case ModelKind::RandomForest: {
                ForestParams f;
                f.single_class = p.at("single_class").get<bool>();
                for (const auto& t : p.at("trees")) f.trees.push_back(tree_from_json(t));
                m.params = std::move(f);
                break;
            }
            case ModelKind::GradientBoostedTrees: {
                BoostParams b;
                b.base_score = p.at("base_score").get<double>();
                b.learning_rate = p.at("learning_rate").get<double>();
                for (const auto& t : p.at("trees")) b.trees.push_back(tree_from_json(t));
                m.params = std::move(b);
                break;
            }
            case ModelKind::LinearSvm: {
                SvmParams v;
                v.mean = p.at("mean").get<std::vector<double>>();
                v.sd = p.at("sd").get<std::vector<double>>();
                v.w = p.at("w").get<std::vector<double>>();
                v.b = p.at("b").get<double>();
                v.platt_a = p.at("platt_a").get<double>();
                v.platt_b = p.at("platt_b").get<double>();
                m.params = std::move(v);
                break;
            }
            case ModelKind::Mlp: {
                MlpParams q;
                q.mean = p.at("mean").get<std::vector<double>>();
                q.sd = p.at("sd").get<std::vector<double>>();
                q.hidden = p.at("hidden").get<int>();
                const auto w1 = p.at("w1").get<std::vector<std::vector<double>>>();
                q.w1.resize(q.hidden, static_cast<Eigen::Index>(q.mean.size()));
                for (int r = 0; r < q.hidden; ++r) {
                    for (std::size_t c = 0; c < q.mean.size(); ++c) q.w1(r, static_cast<Eigen::Index>(c)) = w1.at(static_cast<std::size_t>(r)).at(c);
                }
                const auto b1 = p.at("b1").get<std::vector<double>>();
                const auto w2 = p.at("w2").get<std::vector<double>>();
                q.b1 = Eigen::Map<const Eigen::VectorXd>(b1.data(), static_cast<Eigen::Index>(b1.size()));
                q.w2 = Eigen::Map<const Eigen::VectorXd>(w2.data(), static_cast<Eigen::Index>(w2.size()));
                q.b2 = p.at("b2").get<double>();
                m.params = std::move(q);
                break;
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadCsv, std::string("malformed model document: ") + e.what());
    }
}

std::string TrainedModel::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : to_json(*this)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace calcrad::learn
