#include "calcrad/nifti.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "calcrad/error.hpp"

namespace calcrad::nifti {

namespace {

constexpr int kHeaderSize = 348;
constexpr int kVoxOffset = 352;

bool has_gz_suffix(const std::filesystem::path& p) { return p.extension() == ".gz"; }

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, path.string());
    // gzread passes uncompressed files through unchanged.
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (f == nullptr) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<std::uint8_t> buf;
    std::uint8_t chunk[1 << 16];
    for (;;) {
        const int n = gzread(f, chunk, sizeof chunk);
        if (n < 0) {
            gzclose(f);
            throw Error(ErrorCode::TruncatedFile, "corrupt compressed stream in " + path.string());
        }
        if (n == 0) break;
        buf.insert(buf.end(), chunk, chunk + n);
    }
    gzclose(f);
    return buf;
}

class ByteReader {
public:
    ByteReader(const std::vector<std::uint8_t>& buf, bool swap) : buf_(buf), swap_(swap) {}

    template <typename T>
    [[nodiscard]] T get(std::size_t offset) const {
        std::array<std::uint8_t, sizeof(T)> raw{};
        std::memcpy(raw.data(), buf_.data() + offset, sizeof(T));
        if (swap_) std::reverse(raw.begin(), raw.end());
        T value;
        std::memcpy(&value, raw.data(), sizeof(T));
        return value;
    }

private:
    const std::vector<std::uint8_t>& buf_;
    bool swap_;
};

class ByteWriter {
public:
    ByteWriter(std::vector<std::uint8_t>& buf, bool swap) : buf_(buf), swap_(swap) {}

    template <typename T>
    void put(std::size_t offset, T value) {
        std::array<std::uint8_t, sizeof(T)> raw{};
        std::memcpy(raw.data(), &value, sizeof(T));
        if (swap_) std::reverse(raw.begin(), raw.end());
        std::memcpy(buf_.data() + offset, raw.data(), sizeof(T));
    }

private:
    std::vector<std::uint8_t>& buf_;
    bool swap_;
};

constexpr bool host_is_big = std::endian::native == std::endian::big;

// Shortest decimal representation of a float32, widened to double: 0.49f -> 0.49.
double canonical_float(float f) {
    char text[32];
    auto res = std::to_chars(text, text + sizeof text, f);
    double d = 0.0;
    std::from_chars(text, res.ptr, d);
    return d;
}

int bytes_per_voxel(int datatype) {
    switch (datatype) {
        case static_cast<int>(Datatype::UInt8): return 1;
        case static_cast<int>(Datatype::Int16): return 2;
        case static_cast<int>(Datatype::Float32): return 4;
        case static_cast<int>(Datatype::Float64): return 8;
        default: return 0;
    }
}

Orientation quaternion_orientation(const ByteReader& r, float qfac_raw) {
    const double b = r.get<float>(256);
    const double c = r.get<float>(260);
    const double d = r.get<float>(264);
    const double a = std::sqrt(std::max(0.0, 1.0 - (b * b + c * c + d * d)));
    const double qfac = qfac_raw < 0.0F ? -1.0 : 1.0;
    Orientation o;
    o.direction = {{{a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c) * qfac},
                    {2 * (b * c + a * d), a * a + c * c - b * b - d * d, 2 * (c * d - a * b) * qfac},
                    {2 * (b * d - a * c), 2 * (c * d + a * b), (a * a + d * d - c * c - b * b) * qfac}}};
    o.origin = {r.get<float>(268), r.get<float>(272), r.get<float>(276)};
    return o;
}

Orientation sform_orientation(const ByteReader& r) {
    Orientation o;
    for (int row = 0; row < 3; ++row) {
        const std::size_t base = 280 + static_cast<std::size_t>(row) * 16;
        for (int col = 0; col < 3; ++col) o.direction[row][col] = r.get<float>(base + col * 4);
        o.origin[row] = r.get<float>(base + 12);
    }
    // Normalization of the columns happens in the Volume3D constructor.
    return o;
}

}  // namespace

Volume3D read(const std::filesystem::path& path) {
    const auto header_bytes = slurp(path);
    if (header_bytes.size() < 4) throw Error(ErrorCode::TruncatedFile, path.string() + " is shorter than 4 bytes");

    bool swap = false;
    {
        const ByteReader native(header_bytes, false);
        const ByteReader swapped(header_bytes, true);
        if (native.get<std::int32_t>(0) == kHeaderSize) {
            swap = false;
        } else if (swapped.get<std::int32_t>(0) == kHeaderSize) {
            swap = true;
        } else {
            throw Error(ErrorCode::BadMagic, path.string() + ": sizeof_hdr is not 348");
        }
    }
    if (header_bytes.size() < static_cast<std::size_t>(kHeaderSize)) {
        throw Error(ErrorCode::TruncatedFile, path.string() + ": header shorter than 348 bytes");
    }
    const ByteReader r(header_bytes, swap);

    const char* magic = reinterpret_cast<const char*>(header_bytes.data() + 344);
    const bool single_file = std::memcmp(magic, "n+1\0", 4) == 0;
    const bool pair_file = std::memcmp(magic, "ni1\0", 4) == 0;
    if (!single_file && !pair_file) throw Error(ErrorCode::BadMagic, path.string() + ": magic is not n+1/ni1");

    const int ndim = r.get<std::int16_t>(40);
    if (ndim < 1 || ndim > 7) throw Error(ErrorCode::DimMismatch, path.string() + ": dim[0] out of range");
    int dim[4] = {ndim, 1, 1, 1};
    for (int i = 1; i <= 3 && i <= ndim; ++i) dim[i] = r.get<std::int16_t>(40 + 2 * i);
    if (dim[1] < 1 || dim[2] < 1 || dim[3] < 1) throw Error(ErrorCode::DimMismatch, path.string() + ": dim < 1");

    const int datatype = r.get<std::int16_t>(70);
    const int bpv = bytes_per_voxel(datatype);
    if (bpv == 0) throw Error(ErrorCode::UnsupportedDatatype, path.string() + ": datatype " + std::to_string(datatype));

    Spacing spacing{1.0, 1.0, 1.0};
    for (int i = 1; i <= 3; ++i) {
        if (i > ndim) break;
        const float p = r.get<float>(76 + 4 * i);
        if (!(p > 0.0F) || !std::isfinite(p)) throw Error(ErrorCode::NonPositiveSpacing, path.string());
        spacing[i - 1] = canonical_float(p);
    }

    double slope = r.get<float>(112);
    double inter = r.get<float>(116);
    if (slope == 0.0 || !std::isfinite(slope)) {
        slope = 1.0;
        inter = 0.0;
    }
    if (!std::isfinite(inter)) inter = 0.0;

    Orientation orientation;
    if (r.get<std::int16_t>(254) > 0) {
        orientation = sform_orientation(r);
    } else if (r.get<std::int16_t>(252) > 0) {
        orientation = quaternion_orientation(r, r.get<float>(76));
    }

    const Dims dims{dim[1], dim[2], dim[3]};
    const std::size_t n = dims.count();
    const double vox_offset = r.get<float>(108);

    std::vector<std::uint8_t> img_bytes;
    const std::vector<std::uint8_t>* data = &header_bytes;
    std::size_t offset = 0;
    if (single_file) {
        offset = static_cast<std::size_t>(std::max(vox_offset, static_cast<double>(kHeaderSize)));
    } else {
        auto img_path = path;
        if (has_gz_suffix(img_path)) img_path.replace_extension();
        img_path.replace_extension(".img");
        if (!std::filesystem::exists(img_path)) img_path += ".gz";
        img_bytes = slurp(img_path);
        data = &img_bytes;
        offset = static_cast<std::size_t>(std::max(vox_offset, 0.0));
    }
    if (data->size() < offset || data->size() - offset < n * static_cast<std::size_t>(bpv)) {
        throw Error(ErrorCode::TruncatedFile, path.string() + ": voxel data shorter than dims imply");
    }

    const ByteReader body(*data, swap);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t at = offset + i * static_cast<std::size_t>(bpv);
        double raw = 0.0;
        switch (static_cast<Datatype>(datatype)) {
            case Datatype::UInt8: raw = (*data)[at]; break;
            case Datatype::Int16: raw = body.get<std::int16_t>(at); break;
            case Datatype::Float32: raw = body.get<float>(at); break;
            case Datatype::Float64: raw = body.get<double>(at); break;
        }
        values[i] = raw * slope + inter;
    }
    return Volume3D(dims, spacing, std::move(values), orientation);
}

MaskVolume read_mask(const std::filesystem::path& path) { return MaskVolume::from_volume(read(path)); }

void write(const Volume3D& vol, const std::filesystem::path& path, const WriteOptions& options) {
    const int datatype = static_cast<int>(options.datatype);
    const int bpv = bytes_per_voxel(datatype);
    if (bpv == 0) throw Error(ErrorCode::UnsupportedDatatype, "cannot write datatype " + std::to_string(datatype));
    const bool integer = options.datatype == Datatype::UInt8 || options.datatype == Datatype::Int16;
    const double slope = integer ? options.scl_slope : 1.0;
    const double inter = integer ? options.scl_inter : 0.0;
    if (slope == 0.0) throw Error(ErrorCode::BadRange, "scl_slope must be nonzero");

    const std::size_t n = vol.dims().count();
    std::vector<std::uint8_t> buf(kVoxOffset + n * static_cast<std::size_t>(bpv), 0);
    ByteWriter w(buf, options.big_endian != host_is_big);

    w.put<std::int32_t>(0, kHeaderSize);
    buf[39] = 0;  // dim_info
    const std::int16_t dims[8] = {3,
                                  static_cast<std::int16_t>(vol.dims().nx),
                                  static_cast<std::int16_t>(vol.dims().ny),
                                  static_cast<std::int16_t>(vol.dims().nz),
                                  1, 1, 1, 1};
    if (vol.dims().nx > std::numeric_limits<std::int16_t>::max() ||
        vol.dims().ny > std::numeric_limits<std::int16_t>::max() ||
        vol.dims().nz > std::numeric_limits<std::int16_t>::max()) {
        throw Error(ErrorCode::IoFailure, "dimension exceeds NIfTI-1 limit");
    }
    for (int i = 0; i < 8; ++i) w.put<std::int16_t>(40 + 2 * i, dims[i]);
    w.put<std::int16_t>(70, static_cast<std::int16_t>(datatype));
    w.put<std::int16_t>(72, static_cast<std::int16_t>(bpv * 8));
    const float pixdim[8] = {1.0F,
                             static_cast<float>(vol.spacing()[0]),
                             static_cast<float>(vol.spacing()[1]),
                             static_cast<float>(vol.spacing()[2]),
                             1.0F, 1.0F, 1.0F, 1.0F};
    for (int i = 0; i < 8; ++i) w.put<float>(76 + 4 * i, pixdim[i]);
    w.put<float>(108, static_cast<float>(kVoxOffset));
    w.put<float>(112, static_cast<float>(slope));
    w.put<float>(116, static_cast<float>(inter));
    buf[123] = 2 | 8;  // mm, seconds

    const auto& o = vol.orientation();
    w.put<std::int16_t>(252, 0);
    w.put<std::int16_t>(254, 1);
    for (int row = 0; row < 3; ++row) {
        const std::size_t base = 280 + static_cast<std::size_t>(row) * 16;
        for (int col = 0; col < 3; ++col) {
            w.put<float>(base + col * 4, static_cast<float>(o.direction[row][col] * vol.spacing()[col]));
        }
        w.put<float>(base + 12, static_cast<float>(o.origin[row]));
    }
    std::memcpy(buf.data() + 344, "n+1\0", 4);

    const auto& values = vol.intensities();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t at = kVoxOffset + i * static_cast<std::size_t>(bpv);
        const double stored = (values[i] - inter) / slope;
        switch (options.datatype) {
            case Datatype::UInt8: {
                const double q = std::nearbyint(stored);
                if (!(q >= 0.0 && q <= 255.0)) throw Error(ErrorCode::BadRange, "value does not fit uint8");
                buf[at] = static_cast<std::uint8_t>(q);
                break;
            }
            case Datatype::Int16: {
                const double q = std::nearbyint(stored);
                if (!(q >= -32768.0 && q <= 32767.0)) throw Error(ErrorCode::BadRange, "value does not fit int16");
                w.put<std::int16_t>(at, static_cast<std::int16_t>(q));
                break;
            }
            case Datatype::Float32: w.put<float>(at, static_cast<float>(stored)); break;
            case Datatype::Float64: w.put<double>(at, stored); break;
        }
    }

    if (has_gz_suffix(path)) {
        gzFile f = gzopen(path.string().c_str(), "wb6");
        if (f == nullptr) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
        const int written = gzwrite(f, buf.data(), static_cast<unsigned>(buf.size()));
        const int closed = gzclose(f);
        if (written != static_cast<int>(buf.size()) || closed != Z_OK) {
            throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
        }
    } else {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
    }
}

void write_mask(const MaskVolume& mask, const Spacing& spacing, const std::filesystem::path& path,
                const Orientation& orientation) {
    std::vector<double> values(mask.labels().begin(), mask.labels().end());
    write(Volume3D(mask.dims(), spacing, std::move(values), orientation), path, WriteOptions{Datatype::UInt8});
}

}  // namespace calcrad::nifti
