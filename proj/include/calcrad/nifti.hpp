#pragma once

#include <filesystem>

#include "calcrad/volume.hpp"

namespace calcrad::nifti {

// NIfTI-1 datatype codes understood by the reader and writer.
enum class Datatype : int {
    UInt8 = 2,
    Int16 = 4,
    Float32 = 16,
    Float64 = 64,
};

struct WriteOptions {
    Datatype datatype = Datatype::Float32;
    bool big_endian = false;
    // Applied on disk as stored = (value - inter) / slope; only meaningful for integer types.
    double scl_slope = 1.0;
    double scl_inter = 0.0;
};

/// Reads a single-file (.nii, .nii.gz) or paired (.hdr/.img) NIfTI-1 volume.
/// Intensities are rescaled by scl_slope/scl_inter (slope 0 means no scaling).
/// Orientation comes from the sform when sform_code > 0, else the qform, else identity.
[[nodiscard]] Volume3D read(const std::filesystem::path& path);

/// Reads a volume and thresholds it into a mask (nonzero -> inside).
[[nodiscard]] MaskVolume read_mask(const std::filesystem::path& path);

/// Writes a single-file NIfTI-1 volume; gzip-compressed when the path ends in ".gz".
/// Integer datatypes round to nearest and throw BadRange when a value does not fit.
void write(const Volume3D& vol, const std::filesystem::path& path, const WriteOptions& options = {});

void write_mask(const MaskVolume& mask, const Spacing& spacing, const std::filesystem::path& path,
                const Orientation& orientation = {});

}  // namespace calcrad::nifti
