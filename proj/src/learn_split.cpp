#include <algorithm>
#include <cmath>

#include "calcrad/error.hpp"
#include "calcrad/learn.hpp"
#include "calcrad/rng.hpp"

namespace calcrad::learn {

Split stratified_split(const FeatureTable& table, double test_fraction, std::uint64_t seed,
                       std::optional<ContrastGroup> test_group) {
    if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw Error(ErrorCode::BadRange, "test_fraction must be in [0, 1)");
    if (table.labels.size() != static_cast<std::size_t>(table.rows())) throw Error(ErrorCode::DimMismatch, "table has no labels");
    if (test_group && table.groups.size() != table.labels.size()) throw Error(ErrorCode::DimMismatch, "table has no groups");

    std::vector<RowIndex> eligible[2];
    bool present[2] = {false, false};
    for (std::size_t r = 0; r < table.labels.size(); ++r) {
        const int c = table.labels[r] == CacLabel::NonZero ? 1 : 0;
        present[c] = true;
        if (!test_group || table.groups[r] == *test_group) eligible[c].push_back(static_cast<RowIndex>(r));
    }
    if (!present[0] || !present[1]) throw Error(ErrorCode::SingleClass, "split needs both classes");

    std::vector<char> is_test(table.labels.size(), 0);
    for (int c = 0; c < 2; ++c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        auto rows = eligible[c];
        rng.shuffle(rows);
        const auto n_test = static_cast<std::size_t>(std::lround(test_fraction * static_cast<double>(rows.size())));
        for (std::size_t i = 0; i < n_test && i < rows.size(); ++i) is_test[static_cast<std::size_t>(rows[i])] = 1;
    }
    Split s;
    for (std::size_t r = 0; r < is_test.size(); ++r) (is_test[r] ? s.test : s.train).push_back(static_cast<RowIndex>(r));
    return s;
}

std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::BadRange, "k must be >= 2");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] != 0 ? 1 : 0].push_back(i);
    for (const auto& rows : by_class) {
        if (rows.size() < static_cast<std::size_t>(k)) {
            throw Error(ErrorCode::TooFewPerClass, "each class needs at least " + std::to_string(k) + " rows");
        }
    }
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    std::size_t dealt = 0;
    for (int c = 0; c < 2; ++c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        auto rows = by_class[c];
        rng.shuffle(rows);
        for (const auto r : rows) folds[dealt++ % folds.size()].push_back(r);
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    Dataset d;
    d.features = features;
    d.x.resize(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d.x.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
        d.y.push_back(y[rows[i]]);
    }
    return d;
}

}  // namespace calcrad::learn
