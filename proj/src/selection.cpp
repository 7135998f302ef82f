#include "calcrad/selection.hpp"

#include <cmath>

#include "calcrad/error.hpp"

namespace calcrad::selection {

std::vector<std::string> correlation_filter(const FeatureTable& table, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw Error(ErrorCode::BadRange, "threshold must be in (0, 1]");
    if (table.rows() < 2) throw Error(ErrorCode::TooFewRows, "correlation filter needs >= 2 rows");
    table.validate();

    const Eigen::Index n = table.rows();
    // Centred, unit-norm columns make the Pearson coefficient a dot product.
    std::vector<Eigen::Index> candidates;
    Eigen::MatrixXd z(n, table.cols());
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
        const Eigen::VectorXd col = table.values.col(c);
        const Eigen::VectorXd centred = col.array() - col.mean();
        const double norm = centred.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) continue;
        // Constant columns whose centring leaves round-off only.
        if (norm <= 1e-12 * std::max(1.0, col.cwiseAbs().maxCoeff()) * std::sqrt(static_cast<double>(n))) continue;
        z.col(c) = centred / norm;
        candidates.push_back(c);
    }

    std::vector<Eigen::Index> kept;
    for (const auto c : candidates) {
        bool keep = true;
        for (const auto k : kept) {
            if (std::abs(z.col(c).dot(z.col(k))) >= threshold) {
                keep = false;
                break;
            }
        }
        if (keep) kept.push_back(c);
    }
    std::vector<std::string> names;
    for (const auto k : kept) names.push_back(table.feature_names[static_cast<std::size_t>(k)]);
    return names;
}

Standardizer fit_standardizer(const Eigen::MatrixXd& x, std::vector<std::string> columns) {
    if (static_cast<Eigen::Index>(columns.size()) != x.cols()) throw Error(ErrorCode::DimMismatch, "column names");
    if (x.rows() < 1) throw Error(ErrorCode::TooFewRows, "standardizer needs >= 1 row");
    Standardizer s;
    s.columns = std::move(columns);
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double m = x.col(c).mean();
        const double var = (x.col(c).array() - m).square().mean();
        const double sd = std::sqrt(var);
        s.mean.push_back(m);
        s.sd.push_back(sd > 0.0 ? sd : 1.0);
    }
    return s;
}

Standardizer fit_standardizer(const FeatureTable& table, const std::vector<std::string>& columns) {
    return fit_standardizer(table.select_columns(columns).values, columns);
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
    if (x.cols() != static_cast<Eigen::Index>(columns.size())) throw Error(ErrorCode::SchemaMismatch, "column count");
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        out.col(c) = (x.col(c).array() - mean[static_cast<std::size_t>(c)]) / sd[static_cast<std::size_t>(c)];
    }
    return out;
}

FeatureTable Standardizer::apply(const FeatureTable& table) const {
    FeatureTable out = table.select_columns(columns);
    out.values = apply(out.values);
    return out;
}

}  // namespace calcrad::selection
