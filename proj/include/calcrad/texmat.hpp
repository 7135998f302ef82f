#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "calcrad/preprocess.hpp"

namespace calcrad::texture {

struct Offset {
    int dx = 0;
    int dy = 0;
    int dz = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

/// The 13 unique directions of the 26-neighbourhood (first nonzero component positive).
class DirectionSet {
public:
    /// All 13 directions in a fixed canonical order.
    static DirectionSet all13();
    /// A caller-chosen subset; validated against the same rules.
    explicit DirectionSet(std::vector<Offset> offsets);

    [[nodiscard]] const std::vector<Offset>& offsets() const noexcept { return offsets_; }
    [[nodiscard]] std::size_t size() const noexcept { return offsets_.size(); }

private:
    std::vector<Offset> offsets_;
};

/// Dense row-major integer count matrix. Row r holds gray level r + 1.
struct CountMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> data;

    CountMatrix() = default;
    CountMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}

    std::int64_t& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    std::int64_t operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    [[nodiscard]] std::int64_t total() const noexcept;
    friend bool operator==(const CountMatrix&, const CountMatrix&) = default;
};

struct Glcm {
    int gray_levels = 0;
    int distance = 1;
    std::vector<Offset> directions;
    std::vector<CountMatrix> per_direction;  // Ng x Ng, symmetric
};

struct Glrlm {
    int gray_levels = 0;
    int max_run = 0;
    std::vector<Offset> directions;
    std::vector<CountMatrix> per_direction;  // Ng x max_run, column j is run length j + 1
    std::int64_t voxel_count = 0;
};

struct Glszm {
    int gray_levels = 0;
    int max_zone = 0;
    CountMatrix counts;  // Ng x max_zone, column s is zone size s + 1
    std::int64_t voxel_count = 0;
};

struct Gldm {
    int gray_levels = 0;
    int alpha = 0;
    int max_dependence = 0;
    CountMatrix counts;  // Ng x (max_dependence + 1), column k is k dependent neighbours
};

struct Ngtdm {
    int gray_levels = 0;
    std::vector<std::int64_t> n;  // per level, voxels with >= 1 in-ROI neighbour
    std::vector<double> s;        // per level, sum |i - neighbourhood mean|
    std::int64_t valid_voxels = 0;

    [[nodiscard]] std::vector<double> p() const;
};

[[nodiscard]] Glcm compute_glcm(const prep::DiscretizedRoi& roi, const DirectionSet& dirs, int distance = 1);
[[nodiscard]] Glrlm compute_glrlm(const prep::DiscretizedRoi& roi, const DirectionSet& dirs);
/// Zones are 26-connected components of equal gray level.
[[nodiscard]] Glszm compute_glszm(const prep::DiscretizedRoi& roi);
[[nodiscard]] Gldm compute_gldm(const prep::DiscretizedRoi& roi, int alpha = 0);
[[nodiscard]] Ngtdm compute_ngtdm(const prep::DiscretizedRoi& roi);

/// The 26 neighbour offsets (Chebyshev distance 1).
[[nodiscard]] const std::array<Offset, 26>& neighbourhood26();

}  // namespace calcrad::texture
