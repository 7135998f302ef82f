#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "calcrad/error.hpp"
#include "calcrad/features.hpp"
#include "calcrad/mesh.hpp"

namespace calcrad::features {

namespace {

struct Point {
    Index3 idx;
    Eigen::Vector3d pos;
};

double max_pairwise(const std::vector<Point>& pts, int fixed_axis) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (fixed_axis == 0 && pts[i].idx.x != pts[j].idx.x) continue;
            if (fixed_axis == 1 && pts[i].idx.y != pts[j].idx.y) continue;
            if (fixed_axis == 2 && pts[i].idx.z != pts[j].idx.z) continue;
            best = std::max(best, (pts[i].pos - pts[j].pos).squaredNorm());
        }
    }
    return std::sqrt(best);
}

}  // namespace

std::vector<double> shape(const MaskVolume& mask, const Spacing& spacing) {
    if (mask.voxel_count() == 0) throw Error(ErrorCode::EmptyMask, "shape features of an empty mask");
    const auto& d = mask.dims();

    Index3 lo{d.nx, d.ny, d.nz};
    std::vector<Index3> voxels;
    voxels.reserve(mask.voxel_count());
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x)
                if (mask.at(x, y, z)) {
                    voxels.push_back({x, y, z});
                    lo = {std::min(lo.x, x), std::min(lo.y, y), std::min(lo.z, z)};
                }
    auto physical = [&](const Index3& v) {
        return Eigen::Vector3d((v.x - lo.x) * spacing[0], (v.y - lo.y) * spacing[1], (v.z - lo.z) * spacing[2]);
    };

    const auto tri = mesh::marching_cubes(mask, spacing);
    const double mesh_volume = mesh::enclosed_volume(tri);
    const double area = mesh::surface_area(tri);
    const double voxel_volume = static_cast<double>(voxels.size()) * spacing[0] * spacing[1] * spacing[2];

    // Surface voxels: at least one face neighbour outside the ROI.
    std::vector<Point> surface;
    for (const auto& v : voxels) {
        const bool border = !mask.inside(v.x - 1, v.y, v.z) || !mask.inside(v.x + 1, v.y, v.z) ||
                            !mask.inside(v.x, v.y - 1, v.z) || !mask.inside(v.x, v.y + 1, v.z) ||
                            !mask.inside(v.x, v.y, v.z - 1) || !mask.inside(v.x, v.y, v.z + 1);
        if (border) surface.push_back({v, physical(v)});
    }

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& v : voxels) mean += physical(v);
    mean /= static_cast<double>(voxels.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& v : voxels) {
        const Eigen::Vector3d c = physical(v) - mean;
        cov += c * c.transpose();
    }
    cov /= static_cast<double>(voxels.size());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov, Eigen::EigenvaluesOnly);
    // Ascending order. Values below 1e-12 of the largest are round-off and snap to 0.
    const double major = std::max(0.0, eig.eigenvalues()[2]);
    auto snap = [&](double l) { return l < 1e-12 * major ? 0.0 : l; };
    const double least = snap(eig.eigenvalues()[0]);
    const double minor = snap(eig.eigenvalues()[1]);

    return {
        mesh_volume,
        voxel_volume,
        area,
        area / mesh_volume,
        std::cbrt(36.0 * std::numbers::pi * mesh_volume * mesh_volume) / area,
        max_pairwise(surface, -1),
        max_pairwise(surface, 2),
        max_pairwise(surface, 1),
        max_pairwise(surface, 0),
        4.0 * std::sqrt(major),
        4.0 * std::sqrt(minor),
        4.0 * std::sqrt(least),
        major > 0.0 ? std::sqrt(minor / major) : 0.0,
        major > 0.0 ? std::sqrt(least / major) : 0.0,
    };
}

}  // namespace calcrad::features
