#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace calcrad {

enum class ContrastGroup { Contrast, NonContrast };
enum class CacLabel { Zero, NonZero };

std::string_view to_string(ContrastGroup g) noexcept;
std::string_view to_string(CacLabel l) noexcept;

struct ManifestEntry {
    std::string subject_id;
    std::filesystem::path volume_path;
    std::filesystem::path mask_path;
    ContrastGroup contrast = ContrastGroup::NonContrast;
    CacLabel cac_label = CacLabel::Zero;
    double cac_score = 0.0;
};

struct CohortManifest {
    std::vector<ManifestEntry> entries;

    [[nodiscard]] const ManifestEntry* find(std::string_view subject_id) const;
};

/// Loads `subject_id,volume,mask,contrast,cac_score`. Relative paths resolve against the
/// manifest's directory. cac_score == 0 maps to Zero, > 0 to NonZero.
[[nodiscard]] CohortManifest load_manifest(const std::filesystem::path& path);

/// Writes a manifest with paths relative to `path`'s directory when possible.
void write_manifest(const CohortManifest& manifest, const std::filesystem::path& path);

}  // namespace calcrad
