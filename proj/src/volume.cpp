#include "calcrad/volume.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calcrad/error.hpp"

namespace calcrad {

namespace {

void check_dims(const Dims& d) {
    if (d.nx < 1 || d.ny < 1 || d.nz < 1) {
        throw Error(ErrorCode::DimMismatch, "dimensions must be >= 1");
    }
}

}  // namespace

Volume3D::Volume3D(Dims dims, Spacing spacing, std::vector<double> intensities, Orientation orientation)
    : dims_(dims), spacing_(spacing), orientation_(orientation), data_(std::move(intensities)) {
    check_dims(dims_);
    for (double s : spacing_) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw Error(ErrorCode::NonPositiveSpacing, "voxel spacing must be positive");
        }
    }
    if (data_.size() != dims_.count()) {
        throw Error(ErrorCode::DimMismatch, "intensity count " + std::to_string(data_.size()) +
                                                " does not match dims " + std::to_string(dims_.count()));
    }
    for (int c = 0; c < 3; ++c) {
        double norm = 0.0;
        for (int r = 0; r < 3; ++r) norm += orientation_.direction[r][c] * orientation_.direction[r][c];
        norm = std::sqrt(norm);
        if (!(norm > 0.0)) {
            orientation_.direction = Orientation{}.direction;
            break;
        }
        for (int r = 0; r < 3; ++r) orientation_.direction[r][c] /= norm;
    }
}

MaskVolume::MaskVolume(Dims dims, std::vector<std::uint8_t> labels) : dims_(dims), labels_(std::move(labels)) {
    check_dims(dims_);
    if (labels_.size() != dims_.count()) {
        throw Error(ErrorCode::DimMismatch, "mask label count does not match dims");
    }
    for (auto& v : labels_) v = v != 0 ? 1 : 0;
    voxel_count_ = static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

MaskVolume MaskVolume::from_volume(const Volume3D& vol) {
    std::vector<std::uint8_t> labels(vol.intensities().size());
    std::transform(vol.intensities().begin(), vol.intensities().end(), labels.begin(),
                   [](double v) { return static_cast<std::uint8_t>(v != 0.0 ? 1 : 0); });
    return MaskVolume(vol.dims(), std::move(labels));
}

}  // namespace calcrad
