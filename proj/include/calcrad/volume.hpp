#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace calcrad {

struct Dims {
    int nx = 1;
    int ny = 1;
    int nz = 1;

    [[nodiscard]] std::size_t count() const noexcept {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
    }
    [[nodiscard]] bool contains(int x, int y, int z) const noexcept {
        return x >= 0 && y >= 0 && z >= 0 && x < nx && y < ny && z < nz;
    }
    // x-fastest linear index
    [[nodiscard]] std::size_t index(int x, int y, int z) const noexcept {
        return (static_cast<std::size_t>(z) * ny + y) * nx + x;
    }
    friend bool operator==(const Dims&, const Dims&) = default;
};

using Spacing = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct Index3 {
    int x = 0;
    int y = 0;
    int z = 0;
    friend bool operator==(const Index3&, const Index3&) = default;
    friend auto operator<=>(const Index3&, const Index3&) = default;
};

/// Direction cosines (columns map voxel axes to patient space) plus origin in mm.
struct Orientation {
    Mat3 direction{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    std::array<double, 3> origin{0, 0, 0};
};

/// Immutable scalar volume in Hounsfield units, x-fastest storage.
class Volume3D {
public:
    Volume3D(Dims dims, Spacing spacing, std::vector<double> intensities, Orientation orientation = {});

    [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
    [[nodiscard]] const Spacing& spacing() const noexcept { return spacing_; }
    [[nodiscard]] const Orientation& orientation() const noexcept { return orientation_; }
    [[nodiscard]] const std::vector<double>& intensities() const noexcept { return data_; }
    [[nodiscard]] double at(int x, int y, int z) const { return data_[dims_.index(x, y, z)]; }
    [[nodiscard]] double voxel_volume() const noexcept { return spacing_[0] * spacing_[1] * spacing_[2]; }

private:
    Dims dims_;
    Spacing spacing_;
    Orientation orientation_;
    std::vector<double> data_;
};

/// Boolean ROI on a voxel grid. Any nonzero source value counts as inside.
class MaskVolume {
public:
    MaskVolume(Dims dims, std::vector<std::uint8_t> labels);

    /// Thresholds a volume: nonzero -> true.
    static MaskVolume from_volume(const Volume3D& vol);

    [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
    [[nodiscard]] const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
    [[nodiscard]] bool at(int x, int y, int z) const { return labels_[dims_.index(x, y, z)] != 0; }
    [[nodiscard]] bool inside(int x, int y, int z) const {
        return dims_.contains(x, y, z) && labels_[dims_.index(x, y, z)] != 0;
    }
    [[nodiscard]] std::size_t voxel_count() const noexcept { return voxel_count_; }

private:
    Dims dims_;
    std::vector<std::uint8_t> labels_;
    std::size_t voxel_count_ = 0;
};

}  // namespace calcrad
