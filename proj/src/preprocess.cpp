#include "calcrad/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "calcrad/error.hpp"

namespace calcrad::prep {

DiscretizedRoi::DiscretizedRoi(std::vector<Index3> voxels, std::vector<int> levels, Spacing spacing)
    : voxels_(std::move(voxels)), levels_(std::move(levels)), spacing_(spacing) {
    if (voxels_.empty()) throw Error(ErrorCode::EmptyRoi, "discretized ROI has no voxels");
    if (voxels_.size() != levels_.size()) throw Error(ErrorCode::DimMismatch, "voxel/level count mismatch");

    bounds_.lo = bounds_.hi = voxels_.front();
    for (const auto& v : voxels_) {
        bounds_.lo = {std::min(bounds_.lo.x, v.x), std::min(bounds_.lo.y, v.y), std::min(bounds_.lo.z, v.z)};
        bounds_.hi = {std::max(bounds_.hi.x, v.x), std::max(bounds_.hi.y, v.y), std::max(bounds_.hi.z, v.z)};
    }
    box_ = {bounds_.hi.x - bounds_.lo.x + 1, bounds_.hi.y - bounds_.lo.y + 1, bounds_.hi.z - bounds_.lo.z + 1};
    grid_.assign(box_.count(), 0);
    for (std::size_t i = 0; i < voxels_.size(); ++i) {
        if (levels_[i] < 1) throw Error(ErrorCode::BadRange, "gray levels must be >= 1");
        auto& cell = grid_[box_.index(voxels_[i].x - bounds_.lo.x, voxels_[i].y - bounds_.lo.y,
                                      voxels_[i].z - bounds_.lo.z)];
        if (cell != 0) throw Error(ErrorCode::DimMismatch, "duplicate voxel in ROI");
        cell = levels_[i];
        gray_levels_ = std::max(gray_levels_, levels_[i]);
    }
}

int DiscretizedRoi::level_at(int x, int y, int z) const noexcept {
    x -= bounds_.lo.x;
    y -= bounds_.lo.y;
    z -= bounds_.lo.z;
    if (!box_.contains(x, y, z)) return 0;
    return grid_[box_.index(x, y, z)];
}

MaskedRoi apply_mask(const Volume3D& vol, const MaskVolume& mask) {
    if (vol.dims() != mask.dims()) throw Error(ErrorCode::DimMismatch, "volume and mask grids differ");
    MaskedRoi roi;
    roi.spacing = vol.spacing();
    roi.indices.reserve(mask.voxel_count());
    roi.values.reserve(mask.voxel_count());
    const auto& d = vol.dims();
    for (int z = 0; z < d.nz; ++z) {
        for (int y = 0; y < d.ny; ++y) {
            for (int x = 0; x < d.nx; ++x) {
                if (!mask.at(x, y, z)) continue;
                roi.indices.push_back({x, y, z});
                roi.values.push_back(vol.at(x, y, z));
            }
        }
    }
    return roi;
}

DiscretizedRoi discretize_fixed_width(const MaskedRoi& roi, double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw Error(ErrorCode::NonPositiveWidth, "bin width must be > 0");
    }
    if (roi.empty()) throw Error(ErrorCode::EmptyRoi, "cannot discretize an empty ROI");
    const double lo = *std::min_element(roi.values.begin(), roi.values.end());
    std::vector<int> levels(roi.size());
    std::transform(roi.values.begin(), roi.values.end(), levels.begin(),
                   [&](double v) { return static_cast<int>(std::floor((v - lo) / bin_width)) + 1; });
    return DiscretizedRoi(roi.indices, std::move(levels), roi.spacing);
}

DiscretizedRoi discretize_fixed_count(const MaskedRoi& roi, int n_bins) {
    if (n_bins < 1) throw Error(ErrorCode::NonPositiveWidth, "bin count must be >= 1");
    if (roi.empty()) throw Error(ErrorCode::EmptyRoi, "cannot discretize an empty ROI");
    const auto [lo_it, hi_it] = std::minmax_element(roi.values.begin(), roi.values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::vector<int> levels(roi.size(), 1);
    if (hi > lo) {
        const double width = (hi - lo) / n_bins;
        std::transform(roi.values.begin(), roi.values.end(), levels.begin(), [&](double v) {
            return std::min(static_cast<int>(std::floor((v - lo) / width)) + 1, n_bins);
        });
    }
    return DiscretizedRoi(roi.indices, std::move(levels), roi.spacing);
}

Volume3D clip_and_rescale(const Volume3D& vol, double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw Error(ErrorCode::BadRange, "need lo < hi");
    std::vector<double> out(vol.intensities().size());
    std::transform(vol.intensities().begin(), vol.intensities().end(), out.begin(),
                   [&](double x) { return (std::clamp(x, lo, hi) - lo) / (hi - lo); });
    return Volume3D(vol.dims(), vol.spacing(), std::move(out), vol.orientation());
}

namespace {

struct AxisMap {
    int out_n;
    std::vector<int> i0;
    std::vector<double> frac;
};

// Output voxel j sits at physical (j + 0.5) * new - 0.5 * old relative to input voxel 0's centre.
AxisMap map_axis(int n, double old_sp, double new_sp) {
    AxisMap m;
    m.out_n = std::max(1, static_cast<int>(std::lround(n * old_sp / new_sp)));
    m.i0.resize(m.out_n);
    m.frac.resize(m.out_n);
    for (int j = 0; j < m.out_n; ++j) {
        double pos = ((j + 0.5) * new_sp) / old_sp - 0.5;
        pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
        int i = static_cast<int>(std::floor(pos));
        if (i >= n - 1) i = std::max(0, n - 2);
        m.i0[j] = i;
        m.frac[j] = n == 1 ? 0.0 : pos - i;
    }
    return m;
}

std::vector<double> resample_field(const std::vector<double>& in, const Dims& d, const AxisMap& mx,
                                   const AxisMap& my, const AxisMap& mz) {
    const Dims out{mx.out_n, my.out_n, mz.out_n};
    std::vector<double> result(out.count());
    auto at = [&](int x, int y, int z) { return in[d.index(std::min(x, d.nx - 1), std::min(y, d.ny - 1), std::min(z, d.nz - 1))]; };
    for (int k = 0; k < out.nz; ++k) {
        const int z = mz.i0[k];
        const double fz = mz.frac[k];
        for (int j = 0; j < out.ny; ++j) {
            const int y = my.i0[j];
            const double fy = my.frac[j];
            for (int i = 0; i < out.nx; ++i) {
                const int x = mx.i0[i];
                const double fx = mx.frac[i];
                auto lerp = [](double a, double b, double t) { return t == 0.0 ? a : a + (b - a) * t; };
                const double c00 = lerp(at(x, y, z), at(x + 1, y, z), fx);
                const double c10 = lerp(at(x, y + 1, z), at(x + 1, y + 1, z), fx);
                const double c01 = lerp(at(x, y, z + 1), at(x + 1, y, z + 1), fx);
                const double c11 = lerp(at(x, y + 1, z + 1), at(x + 1, y + 1, z + 1), fx);
                result[out.index(i, j, k)] = lerp(lerp(c00, c10, fy), lerp(c01, c11, fy), fz);
            }
        }
    }
    return result;
}

void check_spacing(const Spacing& s) {
    for (double v : s) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::BadSpacing, "target spacing must be > 0");
    }
}

}  // namespace

Volume3D resample_trilinear(const Volume3D& vol, const Spacing& target_spacing) {
    check_spacing(target_spacing);
    const auto& d = vol.dims();
    const auto& s = vol.spacing();
    const auto mx = map_axis(d.nx, s[0], target_spacing[0]);
    const auto my = map_axis(d.ny, s[1], target_spacing[1]);
    const auto mz = map_axis(d.nz, s[2], target_spacing[2]);
    auto values = resample_field(vol.intensities(), d, mx, my, mz);

    // Keep the new first voxel centre in the right place in patient space.
    Orientation o = vol.orientation();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            const double shift = 0.5 * (target_spacing[c] - s[c]);
            o.origin[r] += o.direction[r][c] * shift;
        }
    }
    return Volume3D({mx.out_n, my.out_n, mz.out_n}, target_spacing, std::move(values), o);
}

MaskVolume resample_mask(const MaskVolume& mask, const Spacing& spacing, const Spacing& target_spacing) {
    check_spacing(target_spacing);
    std::vector<double> field(mask.labels().begin(), mask.labels().end());
    const Volume3D as_volume(mask.dims(), spacing, std::move(field));
    const auto resampled = resample_trilinear(as_volume, target_spacing);
    std::vector<std::uint8_t> labels(resampled.intensities().size());
    std::transform(resampled.intensities().begin(), resampled.intensities().end(), labels.begin(),
                   [](double v) { return static_cast<std::uint8_t>(v >= 0.5 ? 1 : 0); });
    return MaskVolume(resampled.dims(), std::move(labels));
}

}  // namespace calcrad::prep
