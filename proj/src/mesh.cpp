#include "calcrad/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace calcrad::mesh {

namespace {

// Corner c of a cell sits at (c & 1, (c >> 1) & 1, (c >> 2) & 1).
constexpr int bit(int c, int axis) { return (c >> axis) & 1; }

struct CellTables {
    std::array<std::array<int, 2>, 12> edge_corners{};
    std::array<std::array<int, 8>, 8> edge_of{};
    // Per inside-corner pattern: closed polygons as lists of edge ids.
    std::array<std::vector<std::vector<int>>, 256> polygons;
};

CellTables build_tables() {
    CellTables t;
    for (auto& row : t.edge_of) row.fill(-1);
    int e = 0;
    for (int a = 0; a < 8; ++a) {
        for (int axis = 0; axis < 3; ++axis) {
            if (bit(a, axis) != 0) continue;
            const int b = a | (1 << axis);
            t.edge_corners[e] = {a, b};
            t.edge_of[a][b] = t.edge_of[b][a] = e;
            ++e;
        }
    }

    // Faces with corners ordered counter-clockwise seen from outside the cell.
    std::vector<std::array<int, 4>> faces;
    for (int axis = 0; axis < 3; ++axis) {
        const int u = (axis + 1) % 3;
        const int v = (axis + 2) % 3;
        for (int side = 0; side < 2; ++side) {
            // (u, v) square walked counter-clockwise around +axis.
            std::array<int, 4> ring{};
            const int uv[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
            for (int k = 0; k < 4; ++k) ring[k] = (side << axis) | (uv[k][0] << u) | (uv[k][1] << v);
            if (side == 0) std::reverse(ring.begin(), ring.end());
            faces.push_back(ring);
        }
    }

    for (int pattern = 0; pattern < 256; ++pattern) {
        auto inside = [&](int c) { return ((pattern >> c) & 1) != 0; };
        std::array<int, 12> next{};
        next.fill(-1);
        for (const auto& ring : faces) {
            // Crossings in ring order: +edge for entry (out -> in), -(edge+1) for exit.
            std::vector<std::pair<int, bool>> crossings;
            for (int k = 0; k < 4; ++k) {
                const int a = ring[k];
                const int b = ring[(k + 1) % 4];
                if (inside(a) == inside(b)) continue;
                crossings.emplace_back(t.edge_of[a][b], inside(b));
            }
            // Each entry joins the exit that follows it, so inside corners stay separated.
            for (std::size_t k = 0; k < crossings.size(); ++k) {
                if (!crossings[k].second) continue;
                const auto& exit = crossings[(k + 1) % crossings.size()];
                next[crossings[k].first] = exit.first;
            }
        }
        std::array<bool, 12> used{};
        for (int start = 0; start < 12; ++start) {
            if (next[start] < 0 || used[start]) continue;
            std::vector<int> loop;
            for (int cur = start; !used[cur]; cur = next[cur]) {
                used[cur] = true;
                loop.push_back(cur);
            }
            t.polygons[pattern].push_back(std::move(loop));
        }
    }
    return t;
}

const CellTables& tables() {
    static const CellTables t = build_tables();
    return t;
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

TriangleMesh marching_cubes(const MaskVolume& mask, const Spacing& spacing) {
    TriangleMesh out;
    if (mask.voxel_count() == 0) return out;
    const auto& d = mask.dims();
    Index3 lo{d.nx, d.ny, d.nz};
    Index3 hi{-1, -1, -1};
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x)
                if (mask.at(x, y, z)) {
                    lo = {std::min(lo.x, x), std::min(lo.y, y), std::min(lo.z, z)};
                    hi = {std::max(hi.x, x), std::max(hi.y, y), std::max(hi.z, z)};
                }

    const auto& t = tables();
    // Grid points span lo-1 .. hi+1; edge vertices are keyed by (grid point, axis).
    const Dims grid{hi.x - lo.x + 3, hi.y - lo.y + 3, hi.z - lo.z + 3};
    std::unordered_map<std::size_t, int> edge_vertex;
    auto vertex_for = [&](int gx, int gy, int gz, int edge) {
        const auto [a, b] = t.edge_corners[edge];
        int axis = 0;
        while (((a ^ b) >> axis) != 1) ++axis;
        const int px = gx + bit(a, 0);
        const int py = gy + bit(a, 1);
        const int pz = gz + bit(a, 2);
        const std::size_t key = grid.index(px - lo.x + 1, py - lo.y + 1, pz - lo.z + 1) * 3 + static_cast<std::size_t>(axis);
        auto [it, fresh] = edge_vertex.try_emplace(key, static_cast<int>(out.vertices.size()));
        if (fresh) {
            Vec3 p{static_cast<double>(px - lo.x), static_cast<double>(py - lo.y), static_cast<double>(pz - lo.z)};
            p[axis] += 0.5;
            out.vertices.push_back({p[0] * spacing[0], p[1] * spacing[1], p[2] * spacing[2]});
        }
        return it->second;
    };

    for (int gz = lo.z - 1; gz <= hi.z; ++gz) {
        for (int gy = lo.y - 1; gy <= hi.y; ++gy) {
            for (int gx = lo.x - 1; gx <= hi.x; ++gx) {
                int pattern = 0;
                for (int c = 0; c < 8; ++c) {
                    if (mask.inside(gx + bit(c, 0), gy + bit(c, 1), gz + bit(c, 2))) pattern |= 1 << c;
                }
                for (const auto& loop : t.polygons[pattern]) {
                    std::vector<int> ids;
                    ids.reserve(loop.size());
                    for (int edge : loop) ids.push_back(vertex_for(gx, gy, gz, edge));
                    if (ids.size() == 3) {
                        out.triangles.push_back({ids[0], ids[1], ids[2]});
                        continue;
                    }
                    Vec3 c{0, 0, 0};
                    for (int id : ids)
                        for (int k = 0; k < 3; ++k) c[k] += out.vertices[id][k];
                    for (auto& v : c) v /= static_cast<double>(ids.size());
                    const int centre = static_cast<int>(out.vertices.size());
                    out.vertices.push_back(c);
                    for (std::size_t k = 0; k < ids.size(); ++k) {
                        out.triangles.push_back({centre, ids[k], ids[(k + 1) % ids.size()]});
                    }
                }
            }
        }
    }
    return out;
}

double enclosed_volume(const TriangleMesh& m) {
    double v = 0.0;
    for (const auto& tri : m.triangles) {
        v += dot(m.vertices[tri[0]], cross(m.vertices[tri[1]], m.vertices[tri[2]]));
    }
    return v / 6.0;
}

double surface_area(const TriangleMesh& m) {
    double a = 0.0;
    for (const auto& tri : m.triangles) {
        const auto n = cross(sub(m.vertices[tri[1]], m.vertices[tri[0]]), sub(m.vertices[tri[2]], m.vertices[tri[0]]));
        a += std::sqrt(dot(n, n));
    }
    return a / 2.0;
}

}  // namespace calcrad::mesh
