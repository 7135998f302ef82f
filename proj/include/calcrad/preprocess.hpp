#pragma once

#include <vector>

#include "calcrad/volume.hpp"

namespace calcrad::prep {

/// ROI voxels (in volume index order) with their raw HU values.
struct MaskedRoi {
    std::vector<Index3> indices;
    std::vector<double> values;
    Spacing spacing{1.0, 1.0, 1.0};

    [[nodiscard]] bool empty() const noexcept { return indices.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return indices.size(); }
};

struct Bounds {
    Index3 lo;
    Index3 hi;  // inclusive
};

/// Gray-level alphabet over an ROI. Levels are 1..Ng, Ng = max observed level.
/// Keeps a dense lookup over the bounding box so neighbourhood queries are O(1).
class DiscretizedRoi {
public:
    DiscretizedRoi(std::vector<Index3> voxels, std::vector<int> levels, Spacing spacing = {1.0, 1.0, 1.0});

    [[nodiscard]] const std::vector<Index3>& voxels() const noexcept { return voxels_; }
    [[nodiscard]] const std::vector<int>& levels() const noexcept { return levels_; }
    [[nodiscard]] int gray_levels() const noexcept { return gray_levels_; }
    [[nodiscard]] const Spacing& spacing() const noexcept { return spacing_; }
    [[nodiscard]] const Bounds& bounds() const noexcept { return bounds_; }
    [[nodiscard]] std::size_t size() const noexcept { return voxels_.size(); }

    /// Level at an absolute index, 0 when outside the ROI.
    [[nodiscard]] int level_at(int x, int y, int z) const noexcept;
    [[nodiscard]] int level_at(const Index3& p) const noexcept { return level_at(p.x, p.y, p.z); }

private:
    std::vector<Index3> voxels_;
    std::vector<int> levels_;
    int gray_levels_ = 0;
    Spacing spacing_;
    Bounds bounds_;
    Dims box_;
    std::vector<int> grid_;
};

[[nodiscard]] MaskedRoi apply_mask(const Volume3D& vol, const MaskVolume& mask);

/// level = floor((HU - min) / width) + 1
[[nodiscard]] DiscretizedRoi discretize_fixed_width(const MaskedRoi& roi, double bin_width);

/// n equal-width bins over [min, max]; the maximum maps to bin n.
[[nodiscard]] DiscretizedRoi discretize_fixed_count(const MaskedRoi& roi, int n_bins);

/// out = (clamp(x, lo, hi) - lo) / (hi - lo)
[[nodiscard]] Volume3D clip_and_rescale(const Volume3D& vol, double lo, double hi);

/// Trilinear resampling onto a grid covering the same physical extent.
/// Output dims are round(n * old / new), at least 1.
[[nodiscard]] Volume3D resample_trilinear(const Volume3D& vol, const Spacing& target_spacing);

/// Resamples a mask trilinearly and thresholds at 0.5.
[[nodiscard]] MaskVolume resample_mask(const MaskVolume& mask, const Spacing& spacing, const Spacing& target_spacing);

}  // namespace calcrad::prep
