#pragma once

#include <array>
#include <vector>

#include "calcrad/volume.hpp"

namespace calcrad::mesh {

using Vec3 = std::array<double, 3>;

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;  // outward-facing (counter-clockwise seen from outside)
};

/// Marching cubes on the 0.5 isosurface of a binary mask. Coordinates are in mm relative to
/// the centre of the mask's bounding-box minimum voxel, so the mesh is translation invariant.
/// Ambiguous faces keep inside corners separated; polygons with more than three vertices are
/// fanned around their centroid. The result is closed and consistently oriented.
[[nodiscard]] TriangleMesh marching_cubes(const MaskVolume& mask, const Spacing& spacing);

[[nodiscard]] double enclosed_volume(const TriangleMesh& m);
[[nodiscard]] double surface_area(const TriangleMesh& m);

}  // namespace calcrad::mesh
