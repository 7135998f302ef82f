#include "calcrad/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "calcrad/csv.hpp"
#include "calcrad/error.hpp"

namespace calcrad::embeddings {

EmbeddingTable load_embeddings(const std::filesystem::path& path, std::string provenance) {
    const auto raw = csv::read_file(path);
    if (raw.header.size() < 2 || raw.header.front() != "subject_id") {
        throw Error(ErrorCode::BadCsv, path.string() + ": header must be subject_id,e0,...");
    }
    for (std::size_t c = 1; c < raw.header.size(); ++c) {
        if (raw.header[c] != "e" + std::to_string(c - 1)) {
            throw Error(ErrorCode::BadCsv, path.string() + ": expected column e" + std::to_string(c - 1));
        }
    }
    EmbeddingTable t;
    t.dimension = raw.header.size() - 1;
    t.provenance = provenance.empty() ? "ctfm-" + std::to_string(t.dimension) : std::move(provenance);
    t.values.resize(static_cast<Eigen::Index>(raw.rows.size()), static_cast<Eigen::Index>(t.dimension));
    std::set<std::string> seen;
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& row = raw.rows[r];
        if (row.size() != raw.header.size()) {
            throw Error(ErrorCode::RaggedRow, path.string() + ": row " + std::to_string(r + 2) + " has " +
                                                  std::to_string(row.size() - 1) + " values, expected " +
                                                  std::to_string(t.dimension));
        }
        if (!seen.insert(row[0]).second) throw Error(ErrorCode::DuplicateSubject, "duplicate subject " + row[0]);
        t.subject_ids.push_back(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            bool ok = false;
            const double v = csv::parse_double(row[c], &ok);
            if (!ok || !std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteValue, path.string() + ": subject " + row[0] + " value '" + row[c] + "'");
            }
            t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - 1)) = v;
        }
    }
    return t;
}

void write_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    out << "subject_id";
    for (std::size_t c = 0; c < table.dimension; ++c) out << ",e" << c;
    out << '\n';
    for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        out << csv::quote(table.subject_ids[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < table.values.cols(); ++c) out << ',' << csv::format_double(table.values(r, c));
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

std::vector<double> average_slices(const std::vector<std::vector<double>>& slices) {
    if (slices.empty()) throw Error(ErrorCode::EmptyList, "no slice embeddings");
    const std::size_t dim = slices.front().size();
    for (const auto& s : slices) {
        if (s.size() != dim) throw Error(ErrorCode::DimMismatch, "slice embeddings differ in dimension");
    }
    // Sorted offsets from the minimum: order independent, and exact for repeated slices.
    std::vector<double> out(dim), column(slices.size());
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < slices.size(); ++k) column[k] = slices[k][i];
        std::sort(column.begin(), column.end());
        double sum = 0.0;
        for (const double v : column) sum += v - column.front();
        out[i] = column.front() + sum / static_cast<double>(slices.size());
    }
    return out;
}

FeatureTable to_feature_table(const EmbeddingTable& table) {
    FeatureTable t;
    t.subject_ids = table.subject_ids;
    for (std::size_t c = 0; c < table.dimension; ++c) t.feature_names.push_back("e" + std::to_string(c));
    t.values = table.values;
    t.validate();
    return t;
}

JoinResult join(const EmbeddingTable& table, const CohortManifest& manifest) {
    JoinResult r;
    r.table = join_manifest(to_feature_table(table), manifest, &r.missing);
    r.coverage = r.table.subject_ids.size();
    return r;
}

}  // namespace calcrad::embeddings
