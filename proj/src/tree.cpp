#include "calcrad/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace calcrad::learn {

double Tree::eval(const double* row) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
        const auto& n = nodes[static_cast<std::size_t>(i)];
        i = row[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
}

namespace {

struct Candidate {
    int feature = -1;
    double threshold = 0.0;
    double score = -std::numeric_limits<double>::infinity();
};

// Sorted order of rows by one feature.
std::vector<std::size_t> sorted_by(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows, int f) {
    std::vector<std::size_t> order = rows;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x(static_cast<Eigen::Index>(a), f) < x(static_cast<Eigen::Index>(b), f);
    });
    return order;
}

double midpoint(double a, double b) {
    const double m = a + (b - a) / 2.0;
    return m < b ? m : a;
}

class GiniBuilder {
public:
    GiniBuilder(const Eigen::MatrixXd& x, const std::vector<int>& y, const std::vector<double>& w, int max_depth,
                int mtry, Rng& rng)
        : x_(x), y_(y), w_(w), max_depth_(max_depth), mtry_(mtry), rng_(rng) {}

    Tree build(const std::vector<std::size_t>& rows) {
        Tree t;
        grow(t, rows, 0);
        return t;
    }

private:
    int grow(Tree& t, const std::vector<std::size_t>& rows, int depth) {
        const int id = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        double w_total = 0.0, w_pos = 0.0;
        for (const auto r : rows) {
            w_total += w_[r];
            if (y_[r] != 0) w_pos += w_[r];
        }
        const double p1 = w_total > 0.0 ? w_pos / w_total : 0.0;
        t.nodes[static_cast<std::size_t>(id)].value = p1 >= 0.5 ? 1.0 : 0.0;
        const bool pure = w_pos == 0.0 || w_pos == w_total;
        if (pure || rows.size() < 2 || (max_depth_ >= 0 && depth >= max_depth_)) return id;

        const Candidate best = find_split(rows, w_total, w_pos);
        if (best.feature < 0) return id;
        std::vector<std::size_t> left, right;
        for (const auto r : rows) {
            (x_(static_cast<Eigen::Index>(r), best.feature) <= best.threshold ? left : right).push_back(r);
        }
        const int l = grow(t, left, depth + 1);
        const int rr = grow(t, right, depth + 1);
        auto& node = t.nodes[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = rr;
        return id;
    }

    // Visits features in random order; stops after mtry non-constant features.
    Candidate find_split(const std::vector<std::size_t>& rows, double w_total, double w_pos) {
        std::vector<int> features(static_cast<std::size_t>(x_.cols()));
        std::iota(features.begin(), features.end(), 0);
        rng_.shuffle(features);
        Candidate best;
        int visited = 0;
        for (const int f : features) {
            if (visited >= mtry_) break;
            const auto order = sorted_by(x_, rows, f);
            const double lo = x_(static_cast<Eigen::Index>(order.front()), f);
            const double hi = x_(static_cast<Eigen::Index>(order.back()), f);
            if (!(lo < hi)) continue;
            ++visited;
            double wl = 0.0, pl = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const auto r = order[i];
                wl += w_[r];
                if (y_[r] != 0) pl += w_[r];
                const double a = x_(static_cast<Eigen::Index>(r), f);
                const double b = x_(static_cast<Eigen::Index>(order[i + 1]), f);
                if (!(a < b)) continue;
                const double wr = w_total - wl, pr = w_pos - pl;
                // Negative weighted Gini impurity of the children.
                const double gl = wl > 0 ? pl * (wl - pl) / wl : 0.0;
                const double gr = wr > 0 ? pr * (wr - pr) / wr : 0.0;
                const double score = -(gl + gr);
                if (score > best.score) best = {f, midpoint(a, b), score};
            }
        }
        return best;
    }

    const Eigen::MatrixXd& x_;
    const std::vector<int>& y_;
    const std::vector<double>& w_;
    int max_depth_;
    int mtry_;
    Rng& rng_;
};

class NewtonBuilder {
public:
    NewtonBuilder(const Eigen::MatrixXd& x, const std::vector<double>& g, const std::vector<double>& h,
                  const NewtonTreeOptions& opt)
        : x_(x), g_(g), h_(h), opt_(opt) {}

    Tree build(const std::vector<std::size_t>& rows) {
        Tree t;
        grow(t, rows, 0);
        return t;
    }

private:
    int grow(Tree& t, const std::vector<std::size_t>& rows, int depth) {
        const int id = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        double G = 0.0, H = 0.0;
        for (const auto r : rows) {
            G += g_[r];
            H += h_[r];
        }
        t.nodes[static_cast<std::size_t>(id)].value = -G / (H + opt_.lambda);
        if (depth >= opt_.max_depth || rows.size() < 2) return id;

        const double parent = G * G / (H + opt_.lambda);
        Candidate best;
        for (int f = 0; f < x_.cols(); ++f) {
            const auto order = sorted_by(x_, rows, f);
            double gl = 0.0, hl = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const auto r = order[i];
                gl += g_[r];
                hl += h_[r];
                const double a = x_(static_cast<Eigen::Index>(r), f);
                const double b = x_(static_cast<Eigen::Index>(order[i + 1]), f);
                if (!(a < b)) continue;
                const double gr = G - gl, hr = H - hl;
                if (hl < opt_.min_child_weight || hr < opt_.min_child_weight) continue;
                const double gain = gl * gl / (hl + opt_.lambda) + gr * gr / (hr + opt_.lambda) - parent;
                if (gain > best.score) best = {f, midpoint(a, b), gain};
            }
        }
        if (best.feature < 0 || !(best.score > 1e-12)) return id;

        std::vector<std::size_t> left, right;
        for (const auto r : rows) {
            (x_(static_cast<Eigen::Index>(r), best.feature) <= best.threshold ? left : right).push_back(r);
        }
        const int l = grow(t, left, depth + 1);
        const int rr = grow(t, right, depth + 1);
        auto& node = t.nodes[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = rr;
        return id;
    }

    const Eigen::MatrixXd& x_;
    const std::vector<double>& g_;
    const std::vector<double>& h_;
    const NewtonTreeOptions& opt_;
};

}  // namespace

Tree build_gini_tree(const Eigen::MatrixXd& x, const std::vector<int>& y, const std::vector<double>& weights,
                     const std::vector<std::size_t>& rows, int max_depth, int mtry, Rng& rng) {
    GiniBuilder b(x, y, weights, max_depth, std::max(1, mtry), rng);
    return b.build(rows);
}

Tree build_newton_tree(const Eigen::MatrixXd& x, const std::vector<double>& grad, const std::vector<double>& hess,
                       const NewtonTreeOptions& options) {
    std::vector<std::size_t> rows(static_cast<std::size_t>(x.rows()));
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    NewtonBuilder b(x, grad, hess, options);
    return b.build(rows);
}

}  // namespace calcrad::learn
