#pragma once

#include <cstdint>
#include <filesystem>

#include "calcrad/manifest.hpp"
#include "calcrad/volume.hpp"

namespace calcrad::phantom {

struct PhantomOptions {
    int n_subjects = 10;
    double class_balance = 0.5;  // fraction of NonZero subjects
    std::uint64_t seed = 7;
    Dims dims{40, 40, 16};
    Spacing spacing{0.49, 0.49, 1.41};
    double contrast_probability = 0.5;
    double noncontrast_hu = 40.0;
    double contrast_hu = 250.0;
    double noise_sd = 10.0;  // ROI noise is clipped to +-3 sd
    double outside_hu = -80.0;
};

struct Subject {
    Volume3D volume;
    MaskVolume mask;
    ContrastGroup contrast;
    CacLabel label;
    double cac_score;
    int lesions;
    double background_hu;
};

/// One synthetic subject: helical vessel-like tube ROI with optional bright lesions.
[[nodiscard]] Subject make_subject(const PhantomOptions& options, CacLabel label, std::uint64_t seed);

/// Writes volumes/<id>.nii.gz (int16), masks/<id>_mask.nii.gz (uint8) and manifest.csv.
CohortManifest generate(const PhantomOptions& options, const std::filesystem::path& out_dir);

}  // namespace calcrad::phantom
