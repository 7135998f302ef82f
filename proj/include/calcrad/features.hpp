#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "calcrad/preprocess.hpp"
#include "calcrad/texmat.hpp"
#include "calcrad/volume.hpp"

namespace calcrad::features {

enum class Family { FirstOrder, Shape, Glcm, Glrlm, Glszm, Gldm, Ngtdm };

std::string_view to_string(Family f) noexcept;

struct CatalogEntry {
    Family family;
    std::string_view name;     // short name within the family, e.g. "JointEnergy"
    std::string_view formula;  // definition, including degenerate-case substitution
};

inline constexpr std::size_t kFirstOrderCount = 18;
inline constexpr std::size_t kShapeCount = 14;
inline constexpr std::size_t kGlcmCount = 24;
inline constexpr std::size_t kGlrlmCount = 16;
inline constexpr std::size_t kGlszmCount = 16;
inline constexpr std::size_t kGldmCount = 14;
inline constexpr std::size_t kNgtdmCount = 5;
inline constexpr std::size_t kFeatureCount = 107;

// Substituted for NGTDM coarseness when sum p_i s_i == 0.
inline constexpr double kCoarsenessCap = 1e6;

/// The 107 features in canonical order: first-order, shape, GLCM, GLRLM, GLSZM, GLDM, NGTDM.
[[nodiscard]] const std::vector<CatalogEntry>& catalog();

/// Qualified names ("glcm_JointEnergy") in canonical order.
[[nodiscard]] const std::vector<std::string>& feature_names();

[[nodiscard]] std::string qualified_name(const CatalogEntry& e);

struct FeatureVector {
    std::vector<std::string> names;
    std::vector<double> values;

    [[nodiscard]] double get(std::string_view name) const;
};

enum class BinMode { Width, Count };

struct ExtractionConfig {
    BinMode bin_mode = BinMode::Width;
    double bin_width = 25.0;
    int bin_count = 32;
    int glcm_distance = 1;
    int gldm_alpha = 0;
    bool clip = false;  // clip to [clip_lo, clip_hi] and rescale to [0, 1] before discretization
    double clip_lo = -1024.0;
    double clip_hi = 2048.0;
    bool resample = false;
    // Used when resample is on; nonpositive entries mean "smallest input spacing".
    Spacing resample_spacing{0.0, 0.0, 0.0};
};

[[nodiscard]] std::vector<double> first_order(const prep::MaskedRoi& roi, const prep::DiscretizedRoi& disc);
[[nodiscard]] std::vector<double> shape(const MaskVolume& mask, const Spacing& spacing);
[[nodiscard]] std::vector<double> glcm_features(const texture::Glcm& m);
[[nodiscard]] std::vector<double> glrlm_features(const texture::Glrlm& m);
[[nodiscard]] std::vector<double> glszm_features(const texture::Glszm& m);
[[nodiscard]] std::vector<double> gldm_features(const texture::Gldm& m);
[[nodiscard]] std::vector<double> ngtdm_features(const texture::Ngtdm& t);

/// Full 107-entry vector. Throws EmptyMask when the ROI has no voxels.
[[nodiscard]] FeatureVector extract_all(const Volume3D& vol, const MaskVolume& mask, const ExtractionConfig& cfg = {});

}  // namespace calcrad::features
