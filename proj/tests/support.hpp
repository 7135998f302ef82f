#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "calcrad/preprocess.hpp"
#include "calcrad/volume.hpp"
#include "oracles/texture_oracle.hpp"

namespace testing {

inline bool close(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("calcrad_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::vector<unsigned char> read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Random ROI inside a box of at most max_x * max_y * max_z, levels 1..ng.
struct RandomRoi {
    calcrad::prep::DiscretizedRoi disc;
    oracle::Roi ref;
};

inline RandomRoi random_roi(std::mt19937_64& gen, int max_x, int max_y, int max_z, int max_ng) {
    std::uniform_int_distribution<int> dx(1, max_x), dy(1, max_y), dz(1, max_z), dng(1, max_ng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int nx = dx(gen), ny = dy(gen), nz = dz(gen), ng = dng(gen);
    const double density = 0.3 + 0.7 * unit(gen);
    const int ox = static_cast<int>(gen() % 5), oy = static_cast<int>(gen() % 5), oz = static_cast<int>(gen() % 5);
    std::uniform_int_distribution<int> level(1, ng);
    std::vector<calcrad::Index3> voxels;
    std::vector<int> levels;
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x)
                if (unit(gen) < density) {
                    voxels.push_back({x + ox, y + oy, z + oz});
                    levels.push_back(level(gen));
                }
    if (voxels.empty()) {
        voxels.push_back({ox, oy, oz});
        levels.push_back(1);
    }
    oracle::Roi ref{voxels, levels, *std::max_element(levels.begin(), levels.end())};
    return {calcrad::prep::DiscretizedRoi(voxels, levels), ref};
}

/// Random volume + mask pair with integer-valued HU.
struct RandomScan {
    calcrad::Volume3D vol;
    calcrad::MaskVolume mask;
};

inline RandomScan random_scan(std::mt19937_64& gen, calcrad::Dims d, calcrad::Spacing sp, double density) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> hu(-50, 200);
    std::vector<double> values(d.count());
    std::vector<std::uint8_t> labels(d.count());
    for (std::size_t i = 0; i < d.count(); ++i) {
        values[i] = hu(gen);
        labels[i] = unit(gen) < density ? 1 : 0;
    }
    if (std::find(labels.begin(), labels.end(), 1) == labels.end()) labels[d.count() / 2] = 1;
    return {calcrad::Volume3D(d, sp, std::move(values)), calcrad::MaskVolume(d, std::move(labels))};
}

/// Hand-assembled NIfTI-1 single file, independent of the library writer.
struct RawNifti {
    short dims[3] = {1, 1, 1};
    short datatype = 16;
    short bitpix = 32;
    float pixdim[3] = {1, 1, 1};
    float scl_slope = 1.0f;
    float scl_inter = 0.0f;
    bool big_endian = false;
    char magic[4] = {'n', '+', '1', '\0'};
    std::vector<unsigned char> payload;  // little-endian element bytes

    void write(const std::filesystem::path& path) const {
        std::vector<unsigned char> h(352, 0);
        auto put = [&](std::size_t off, const void* src, std::size_t n) {
            std::memcpy(&h[off], src, n);
            if (big_endian) std::reverse(h.begin() + static_cast<long>(off), h.begin() + static_cast<long>(off + n));
        };
        const int sizeof_hdr = 348;
        put(0, &sizeof_hdr, 4);
        const short dim[8] = {3, dims[0], dims[1], dims[2], 1, 1, 1, 1};
        for (int i = 0; i < 8; ++i) put(40 + 2 * static_cast<std::size_t>(i), &dim[i], 2);
        put(70, &datatype, 2);
        put(72, &bitpix, 2);
        const float pd[8] = {1, pixdim[0], pixdim[1], pixdim[2], 1, 1, 1, 1};
        for (int i = 0; i < 8; ++i) put(76 + 4 * static_cast<std::size_t>(i), &pd[i], 4);
        const float vox_offset = 352.0f;
        put(108, &vox_offset, 4);
        put(112, &scl_slope, 4);
        put(116, &scl_inter, 4);
        std::memcpy(&h[344], magic, 4);
        std::vector<unsigned char> body = payload;
        const std::size_t width = static_cast<std::size_t>(bitpix / 8);
        if (big_endian && width > 1) {
            for (std::size_t i = 0; i + width <= body.size(); i += width) {
                std::reverse(body.begin() + static_cast<long>(i), body.begin() + static_cast<long>(i + width));
            }
        }
        std::ofstream out(path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size()));
        out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
    }

    template <class T>
    void set_values(const std::vector<T>& v) {
        payload.resize(v.size() * sizeof(T));
        std::memcpy(payload.data(), v.data(), payload.size());
    }
};

}  // namespace testing
