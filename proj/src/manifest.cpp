#include "calcrad/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "calcrad/csv.hpp"
#include "calcrad/error.hpp"

namespace calcrad {

std::string_view to_string(ContrastGroup g) noexcept {
    return g == ContrastGroup::Contrast ? "contrast" : "noncontrast";
}

std::string_view to_string(CacLabel l) noexcept { return l == CacLabel::Zero ? "Zero" : "NonZero"; }

const ManifestEntry* CohortManifest::find(std::string_view subject_id) const {
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const ManifestEntry& e) { return e.subject_id == subject_id; });
    return it == entries.end() ? nullptr : &*it;
}

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

CohortManifest load_manifest(const std::filesystem::path& path) {
    const auto table = csv::read_file(path);
    const std::vector<std::string> expected = {"subject_id", "volume", "mask", "contrast", "cac_score"};
    std::vector<std::string> header;
    for (const auto& h : table.header) header.push_back(lower(trim(h)));
    if (header != expected) {
        throw Error(ErrorCode::BadCsv, path.string() + ": header must be subject_id,volume,mask,contrast,cac_score");
    }

    const auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    CohortManifest manifest;
    std::set<std::string> seen;
    std::size_t line = 1;
    for (const auto& row : table.rows) {
        ++line;
        if (row.size() != expected.size()) {
            throw Error(ErrorCode::BadCsv, path.string() + ":" + std::to_string(line) + ": expected 5 fields");
        }
        ManifestEntry e;
        e.subject_id = trim(row[0]);
        if (e.subject_id.empty()) throw Error(ErrorCode::BadLabel, "empty subject_id on line " + std::to_string(line));
        if (!seen.insert(e.subject_id).second) throw Error(ErrorCode::DuplicateSubject, e.subject_id);

        e.volume_path = resolve(trim(row[1]));
        e.mask_path = resolve(trim(row[2]));
        for (const auto& p : {e.volume_path, e.mask_path}) {
            if (!std::filesystem::exists(p)) {
                throw Error(ErrorCode::MissingFile, e.subject_id + ": " + p.string());
            }
        }

        const auto contrast = lower(trim(row[3]));
        if (contrast == "contrast") {
            e.contrast = ContrastGroup::Contrast;
        } else if (contrast == "noncontrast") {
            e.contrast = ContrastGroup::NonContrast;
        } else {
            throw Error(ErrorCode::BadLabel, e.subject_id + ": contrast must be contrast|noncontrast");
        }

        bool ok = false;
        e.cac_score = csv::parse_double(row[4], &ok);
        if (!ok || !std::isfinite(e.cac_score) || e.cac_score < 0.0) {
            throw Error(ErrorCode::BadLabel, e.subject_id + ": cac_score must be a non-negative number");
        }
        e.cac_label = e.cac_score == 0.0 ? CacLabel::Zero : CacLabel::NonZero;
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

void write_manifest(const CohortManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    const auto base = path.parent_path();
    auto rel = [&](const std::filesystem::path& p) {
        std::error_code ec;
        auto r = std::filesystem::relative(p, base.empty() ? std::filesystem::path(".") : base, ec);
        return (ec || r.empty()) ? p.generic_string() : r.generic_string();
    };
    out << "subject_id,volume,mask,contrast,cac_score\n";
    for (const auto& e : manifest.entries) {
        out << csv::quote(e.subject_id) << ',' << csv::quote(rel(e.volume_path)) << ',' << csv::quote(rel(e.mask_path))
            << ',' << to_string(e.contrast) << ',' << csv::format_double(e.cac_score) << '\n';
    }
    if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

}  // namespace calcrad
