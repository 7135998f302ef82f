#include <algorithm>
#include <optional>

#include "calcrad/error.hpp"
#include "calcrad/features.hpp"

namespace calcrad::features {

FeatureVector extract_all(const Volume3D& vol, const MaskVolume& mask, const ExtractionConfig& cfg) {
    if (vol.dims() != mask.dims()) throw Error(ErrorCode::DimMismatch, "volume and mask grids differ");

    const Volume3D* image = &vol;
    const MaskVolume* roi_mask = &mask;
    std::optional<Volume3D> resampled_vol;
    std::optional<MaskVolume> resampled_mask;
    if (cfg.resample) {
        const double finest = *std::min_element(vol.spacing().begin(), vol.spacing().end());
        Spacing target = cfg.resample_spacing;
        for (auto& s : target)
            if (!(s > 0.0)) s = finest;
        resampled_vol = prep::resample_trilinear(vol, target);
        resampled_mask = prep::resample_mask(mask, vol.spacing(), target);
        image = &*resampled_vol;
        roi_mask = &*resampled_mask;
    }

    std::optional<Volume3D> clipped;
    if (cfg.clip) {
        clipped = prep::clip_and_rescale(*image, cfg.clip_lo, cfg.clip_hi);
        image = &*clipped;
    }

    const auto roi = prep::apply_mask(*image, *roi_mask);
    if (roi.empty()) throw Error(ErrorCode::EmptyMask, "mask has no voxels");
    const auto disc = cfg.bin_mode == BinMode::Width ? prep::discretize_fixed_width(roi, cfg.bin_width)
                                                     : prep::discretize_fixed_count(roi, cfg.bin_count);
    const auto dirs = texture::DirectionSet::all13();

    FeatureVector out;
    out.names = feature_names();
    out.values.reserve(kFeatureCount);
    auto append = [&](const std::vector<double>& v) { out.values.insert(out.values.end(), v.begin(), v.end()); };
    append(first_order(roi, disc));
    append(shape(*roi_mask, image->spacing()));
    append(glcm_features(texture::compute_glcm(disc, dirs, cfg.glcm_distance)));
    append(glrlm_features(texture::compute_glrlm(disc, dirs)));
    append(glszm_features(texture::compute_glszm(disc)));
    append(gldm_features(texture::compute_gldm(disc, cfg.gldm_alpha)));
    append(ngtdm_features(texture::compute_ngtdm(disc)));
    return out;
}

}  // namespace calcrad::features
