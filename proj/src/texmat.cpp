#include "calcrad/texmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "calcrad/error.hpp"

namespace calcrad::texture {

namespace {

bool canonical_sign(const Offset& o) {
    if (o.dx != 0) return o.dx > 0;
    if (o.dy != 0) return o.dy > 0;
    return o.dz > 0;
}

void require_nonempty(const prep::DiscretizedRoi& roi) {
    if (roi.size() == 0) throw Error(ErrorCode::EmptyRoi, "texture matrix of an empty ROI");
}

}  // namespace

std::int64_t CountMatrix::total() const noexcept { return std::accumulate(data.begin(), data.end(), std::int64_t{0}); }

DirectionSet DirectionSet::all13() {
    std::vector<Offset> offsets;
    for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const Offset o{dx, dy, dz};
                if (canonical_sign(o) && !(dx == 0 && dy == 0 && dz == 0)) offsets.push_back(o);
            }
        }
    }
    return DirectionSet(std::move(offsets));
}

DirectionSet::DirectionSet(std::vector<Offset> offsets) : offsets_(std::move(offsets)) {
    if (offsets_.empty()) throw Error(ErrorCode::BadRange, "direction set is empty");
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
        const auto& o = offsets_[i];
        if (std::abs(o.dx) > 1 || std::abs(o.dy) > 1 || std::abs(o.dz) > 1 || (o.dx == 0 && o.dy == 0 && o.dz == 0) ||
            !canonical_sign(o)) {
            throw Error(ErrorCode::BadRange, "direction components must be in {-1,0,1}, nonzero, first nonzero > 0");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (offsets_[j] == o) throw Error(ErrorCode::BadRange, "duplicate direction");
        }
    }
}

const std::array<Offset, 26>& neighbourhood26() {
    static const std::array<Offset, 26> offsets = [] {
        std::array<Offset, 26> out{};
        std::size_t n = 0;
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (dx != 0 || dy != 0 || dz != 0) out[n++] = {dx, dy, dz};
        return out;
    }();
    return offsets;
}

Glcm compute_glcm(const prep::DiscretizedRoi& roi, const DirectionSet& dirs, int distance) {
    require_nonempty(roi);
    if (distance < 1) throw Error(ErrorCode::BadRange, "GLCM distance must be >= 1");
    const int ng = roi.gray_levels();
    Glcm out;
    out.gray_levels = ng;
    out.distance = distance;
    out.directions = dirs.offsets();
    for (const auto& d : dirs.offsets()) {
        CountMatrix m(ng, ng);
        for (std::size_t k = 0; k < roi.size(); ++k) {
            const auto& v = roi.voxels()[k];
            const int other = roi.level_at(v.x + distance * d.dx, v.y + distance * d.dy, v.z + distance * d.dz);
            if (other == 0) continue;
            const int a = roi.levels()[k] - 1;
            const int b = other - 1;
            ++m(a, b);
            ++m(b, a);
        }
        out.per_direction.push_back(std::move(m));
    }
    return out;
}

Glrlm compute_glrlm(const prep::DiscretizedRoi& roi, const DirectionSet& dirs) {
    require_nonempty(roi);
    const int ng = roi.gray_levels();
    // Runs are collected first so every direction shares one column count.
    std::vector<std::vector<std::pair<int, int>>> runs(dirs.size());
    int max_run = 1;
    for (std::size_t di = 0; di < dirs.size(); ++di) {
        const auto& d = dirs.offsets()[di];
        for (std::size_t k = 0; k < roi.size(); ++k) {
            const auto& v = roi.voxels()[k];
            const int level = roi.levels()[k];
            // Only run heads walk forward.
            if (roi.level_at(v.x - d.dx, v.y - d.dy, v.z - d.dz) == level) continue;
            int length = 1;
            while (roi.level_at(v.x + length * d.dx, v.y + length * d.dy, v.z + length * d.dz) == level) ++length;
            runs[di].emplace_back(level, length);
            max_run = std::max(max_run, length);
        }
    }
    Glrlm out;
    out.gray_levels = ng;
    out.max_run = max_run;
    out.directions = dirs.offsets();
    out.voxel_count = static_cast<std::int64_t>(roi.size());
    for (const auto& dir_runs : runs) {
        CountMatrix m(ng, max_run);
        for (const auto& [level, length] : dir_runs) ++m(level - 1, length - 1);
        out.per_direction.push_back(std::move(m));
    }
    return out;
}

Glszm compute_glszm(const prep::DiscretizedRoi& roi) {
    require_nonempty(roi);
    const int ng = roi.gray_levels();
    const auto& b = roi.bounds();
    const Dims box{b.hi.x - b.lo.x + 1, b.hi.y - b.lo.y + 1, b.hi.z - b.lo.z + 1};
    std::vector<char> visited(box.count(), 0);
    auto mark = [&](const Index3& p) -> char& { return visited[box.index(p.x - b.lo.x, p.y - b.lo.y, p.z - b.lo.z)]; };

    std::vector<std::pair<int, int>> zones;
    int max_zone = 1;
    std::queue<Index3> frontier;
    for (std::size_t k = 0; k < roi.size(); ++k) {
        const auto& seed = roi.voxels()[k];
        if (mark(seed)) continue;
        const int level = roi.levels()[k];
        mark(seed) = 1;
        frontier.push(seed);
        int size = 0;
        while (!frontier.empty()) {
            const Index3 p = frontier.front();
            frontier.pop();
            ++size;
            for (const auto& o : neighbourhood26()) {
                const Index3 q{p.x + o.dx, p.y + o.dy, p.z + o.dz};
                if (roi.level_at(q) != level || mark(q)) continue;
                mark(q) = 1;
                frontier.push(q);
            }
        }
        zones.emplace_back(level, size);
        max_zone = std::max(max_zone, size);
    }
    Glszm out;
    out.gray_levels = ng;
    out.max_zone = max_zone;
    out.voxel_count = static_cast<std::int64_t>(roi.size());
    out.counts = CountMatrix(ng, max_zone);
    for (const auto& [level, size] : zones) ++out.counts(level - 1, size - 1);
    return out;
}

Gldm compute_gldm(const prep::DiscretizedRoi& roi, int alpha) {
    require_nonempty(roi);
    if (alpha < 0) throw Error(ErrorCode::BadRange, "GLDM alpha must be >= 0");
    const int ng = roi.gray_levels();
    std::vector<int> dependence(roi.size(), 0);
    int max_dep = 0;
    for (std::size_t k = 0; k < roi.size(); ++k) {
        const auto& v = roi.voxels()[k];
        const int level = roi.levels()[k];
        int dep = 0;
        for (const auto& o : neighbourhood26()) {
            const int other = roi.level_at(v.x + o.dx, v.y + o.dy, v.z + o.dz);
            if (other != 0 && std::abs(other - level) <= alpha) ++dep;
        }
        dependence[k] = dep;
        max_dep = std::max(max_dep, dep);
    }
    Gldm out;
    out.gray_levels = ng;
    out.alpha = alpha;
    out.max_dependence = max_dep;
    out.counts = CountMatrix(ng, max_dep + 1);
    for (std::size_t k = 0; k < roi.size(); ++k) ++out.counts(roi.levels()[k] - 1, dependence[k]);
    return out;
}

std::vector<double> Ngtdm::p() const {
    std::vector<double> out(n.size(), 0.0);
    if (valid_voxels == 0) return out;
    for (std::size_t i = 0; i < n.size(); ++i) out[i] = static_cast<double>(n[i]) / static_cast<double>(valid_voxels);
    return out;
}

Ngtdm compute_ngtdm(const prep::DiscretizedRoi& roi) {
    require_nonempty(roi);
    const int ng = roi.gray_levels();
    Ngtdm out;
    out.gray_levels = ng;
    out.n.assign(ng, 0);
    out.s.assign(ng, 0.0);
    for (std::size_t k = 0; k < roi.size(); ++k) {
        const auto& v = roi.voxels()[k];
        int count = 0;
        std::int64_t sum = 0;
        for (const auto& o : neighbourhood26()) {
            const int other = roi.level_at(v.x + o.dx, v.y + o.dy, v.z + o.dz);
            if (other == 0) continue;
            ++count;
            sum += other;
        }
        if (count == 0) continue;
        const int level = roi.levels()[k];
        ++out.n[level - 1];
        out.s[level - 1] += std::abs(level - static_cast<double>(sum) / count);
        ++out.valid_voxels;
    }
    return out;
}

}  // namespace calcrad::texture
