#include "calcrad/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "calcrad/error.hpp"
#include "calcrad/nifti.hpp"
#include "calcrad/rng.hpp"

namespace calcrad::phantom {

namespace {

constexpr double kLesionMinAbove = 200.0;
constexpr double kLesionMaxAbove = 600.0;

}  // namespace

Subject make_subject(const PhantomOptions& o, CacLabel label, std::uint64_t seed) {
    Rng rng(seed);
    const Dims d = o.dims;
    const ContrastGroup contrast = rng.bernoulli(o.contrast_probability) ? ContrastGroup::Contrast : ContrastGroup::NonContrast;
    const double background = contrast == ContrastGroup::Contrast ? o.contrast_hu : o.noncontrast_hu;

    // Tube centre follows a helix around the volume axis.
    const double amp = std::min(d.nx, d.ny) * rng.uniform(0.15, 0.25);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double turns = rng.uniform(0.5, 1.0);
    const double radius = rng.uniform(2.5, 3.5);
    std::vector<std::uint8_t> mask(d.count(), 0);
    std::vector<double> hu(d.count());
    for (int z = 0; z < d.nz; ++z) {
        const double a = phase + 2.0 * std::numbers::pi * turns * z / d.nz;
        const double cx = 0.5 * (d.nx - 1) + amp * std::cos(a);
        const double cy = 0.5 * (d.ny - 1) + amp * std::sin(a);
        for (int y = 0; y < d.ny; ++y) {
            for (int x = 0; x < d.nx; ++x) {
                const std::size_t i = d.index(x, y, z);
                const bool inside = std::hypot(x - cx, y - cy) <= radius;
                mask[i] = inside ? 1 : 0;
                const double noise = std::clamp(rng.normal() * o.noise_sd, -3.0 * o.noise_sd, 3.0 * o.noise_sd);
                hu[i] = (inside ? background : o.outside_hu) + noise;
            }
        }
    }

    int lesions = 0;
    double score = 0.0;
    if (label == CacLabel::NonZero) {
        std::vector<std::size_t> roi;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (mask[i]) roi.push_back(i);
        }
        lesions = 1 + static_cast<int>(rng.below(5));
        for (int l = 0; l < lesions; ++l) {
            const std::size_t c = roi[static_cast<std::size_t>(rng.below(roi.size()))];
            const int cx = static_cast<int>(c % static_cast<std::size_t>(d.nx));
            const int cy = static_cast<int>((c / static_cast<std::size_t>(d.nx)) % static_cast<std::size_t>(d.ny));
            const int cz = static_cast<int>(c / (static_cast<std::size_t>(d.nx) * static_cast<std::size_t>(d.ny)));
            const double r = rng.uniform(1.0, 2.0);  // in-plane voxels
            const double peak = background + rng.uniform(kLesionMinAbove, kLesionMaxAbove);
            const int ri = static_cast<int>(std::ceil(r));
            for (int z = cz - 1; z <= cz + 1; ++z) {
                for (int y = cy - ri; y <= cy + ri; ++y) {
                    for (int x = cx - ri; x <= cx + ri; ++x) {
                        if (!d.contains(x, y, z) || !mask[d.index(x, y, z)]) continue;
                        const double dz = (z - cz) * o.spacing[2] / o.spacing[0];
                        if (std::hypot(x - cx, y - cy, dz) > r) continue;
                        auto& v = hu[d.index(x, y, z)];
                        v = std::max(v, peak);
                    }
                }
            }
            score += peak - background;
        }
    }
    for (auto& v : hu) v = std::round(v);
    return Subject{Volume3D(d, o.spacing, std::move(hu)), MaskVolume(d, std::move(mask)), contrast, label, score, lesions,
                   background};
}

CohortManifest generate(const PhantomOptions& o, const std::filesystem::path& out_dir) {
    if (o.n_subjects < 2) throw Error(ErrorCode::BadRange, "phantom cohort needs >= 2 subjects");
    if (!(o.class_balance >= 0.0 && o.class_balance <= 1.0)) throw Error(ErrorCode::BadRange, "class balance must be in [0, 1]");
    std::error_code ec;
    std::filesystem::create_directories(out_dir / "volumes", ec);
    std::filesystem::create_directories(out_dir / "masks", ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());

    const auto n_pos = static_cast<int>(std::lround(o.n_subjects * o.class_balance));
    std::vector<CacLabel> labels(static_cast<std::size_t>(o.n_subjects), CacLabel::Zero);
    std::fill_n(labels.begin(), n_pos, CacLabel::NonZero);
    Rng rng(derive_seed(o.seed, 0));
    rng.shuffle(labels);

    CohortManifest manifest;
    for (int s = 0; s < o.n_subjects; ++s) {
        char id[32];
        std::snprintf(id, sizeof id, "phantom-%03d", s);
        const Subject subj = make_subject(o, labels[static_cast<std::size_t>(s)], derive_seed(o.seed, 1000 + static_cast<std::uint64_t>(s)));
        ManifestEntry e;
        e.subject_id = id;
        e.volume_path = out_dir / "volumes" / (std::string(id) + ".nii.gz");
        e.mask_path = out_dir / "masks" / (std::string(id) + "_mask.nii.gz");
        e.contrast = subj.contrast;
        e.cac_label = subj.label;
        e.cac_score = subj.cac_score;
        nifti::WriteOptions wo;
        wo.datatype = nifti::Datatype::Int16;
        nifti::write(subj.volume, e.volume_path, wo);
        nifti::write_mask(subj.mask, subj.volume.spacing(), e.mask_path);
        manifest.entries.push_back(std::move(e));
    }
    write_manifest(manifest, out_dir / "manifest.csv");
    return manifest;
}

}  // namespace calcrad::phantom
