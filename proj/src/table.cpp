#include "calcrad/table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include "calcrad/csv.hpp"
#include "calcrad/error.hpp"

namespace calcrad {

void FeatureTable::validate() const {
    if (values.rows() != static_cast<Eigen::Index>(subject_ids.size()) ||
        values.cols() != static_cast<Eigen::Index>(feature_names.size())) {
        throw Error(ErrorCode::DimMismatch, "feature table is not rectangular");
    }
    if (!labels.empty() && labels.size() != subject_ids.size()) throw Error(ErrorCode::DimMismatch, "label count");
    if (!groups.empty() && groups.size() != subject_ids.size()) throw Error(ErrorCode::DimMismatch, "group count");
    if (std::set<std::string>(subject_ids.begin(), subject_ids.end()).size() != subject_ids.size()) {
        throw Error(ErrorCode::DuplicateSubject, "feature table has repeated subject ids");
    }
    if (std::set<std::string>(feature_names.begin(), feature_names.end()).size() != feature_names.size()) {
        throw Error(ErrorCode::BadCsv, "feature table has repeated column names");
    }
}

Eigen::Index FeatureTable::column_index(std::string_view name) const {
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) throw Error(ErrorCode::UnknownColumn, std::string(name));
    return static_cast<Eigen::Index>(it - feature_names.begin());
}

FeatureTable FeatureTable::select_rows(const std::vector<Eigen::Index>& rows) const {
    FeatureTable out;
    out.feature_names = feature_names;
    out.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto r = rows[k];
        out.values.row(static_cast<Eigen::Index>(k)) = values.row(r);
        out.subject_ids.push_back(subject_ids[static_cast<std::size_t>(r)]);
        if (!labels.empty()) out.labels.push_back(labels[static_cast<std::size_t>(r)]);
        if (!groups.empty()) out.groups.push_back(groups[static_cast<std::size_t>(r)]);
    }
    return out;
}

FeatureTable FeatureTable::select_columns(const std::vector<std::string>& names) const {
    FeatureTable out;
    out.subject_ids = subject_ids;
    out.labels = labels;
    out.groups = groups;
    out.feature_names = names;
    out.values.resize(values.rows(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t k = 0; k < names.size(); ++k) out.values.col(static_cast<Eigen::Index>(k)) = values.col(column_index(names[k]));
    return out;
}

std::vector<int> FeatureTable::label_vector() const {
    std::vector<int> y(labels.size());
    std::transform(labels.begin(), labels.end(), y.begin(), [](CacLabel l) { return l == CacLabel::NonZero ? 1 : 0; });
    return y;
}

void write_feature_csv(const FeatureTable& table, const std::filesystem::path& path) {
    table.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    out << "subject_id";
    for (const auto& n : table.feature_names) out << ',' << csv::quote(n);
    out << '\n';
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
        out << csv::quote(table.subject_ids[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < table.cols(); ++c) out << ',' << csv::format_double(table.values(r, c));
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
    const auto raw = csv::read_file(path);
    if (raw.header.empty() || raw.header.front() != "subject_id") {
        throw Error(ErrorCode::BadCsv, path.string() + ": first column must be subject_id");
    }
    FeatureTable t;
    t.feature_names.assign(raw.header.begin() + 1, raw.header.end());
    t.values.resize(static_cast<Eigen::Index>(raw.rows.size()), static_cast<Eigen::Index>(t.feature_names.size()));
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& row = raw.rows[r];
        if (row.size() != raw.header.size()) {
            throw Error(ErrorCode::RaggedRow, path.string() + ": row " + std::to_string(r + 2) + " has " +
                                                  std::to_string(row.size()) + " fields");
        }
        t.subject_ids.push_back(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            bool ok = false;
            const double v = csv::parse_double(row[c], &ok);
            if (!ok) throw Error(ErrorCode::BadCsv, path.string() + ": not a number: " + row[c]);
            t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - 1)) = v;
        }
    }
    t.validate();
    return t;
}

FeatureTable join_manifest(const FeatureTable& table, const CohortManifest& manifest, std::vector<std::string>* missing) {
    std::unordered_map<std::string, Eigen::Index> row_of;
    for (std::size_t r = 0; r < table.subject_ids.size(); ++r) row_of[table.subject_ids[r]] = static_cast<Eigen::Index>(r);
    std::vector<Eigen::Index> rows;
    std::vector<const ManifestEntry*> entries;
    for (const auto& e : manifest.entries) {
        const auto it = row_of.find(e.subject_id);
        if (it == row_of.end()) {
            if (missing) missing->push_back(e.subject_id);
            continue;
        }
        rows.push_back(it->second);
        entries.push_back(&e);
    }
    FeatureTable out = table.select_rows(rows);
    out.labels.clear();
    out.groups.clear();
    for (const auto* e : entries) {
        out.labels.push_back(e->cac_label);
        out.groups.push_back(e->contrast);
    }
    return out;
}

}  // namespace calcrad
