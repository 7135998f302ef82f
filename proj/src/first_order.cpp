#include <algorithm>
#include <cmath>
#include <numeric>

#include "calcrad/error.hpp"
#include "calcrad/features.hpp"

namespace calcrad::features {

namespace {

// Linear interpolation between order statistics at position q (n - 1).
double percentile(const std::vector<double>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double mean_abs_dev(const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += std::abs(x - m);
    return acc / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> first_order(const prep::MaskedRoi& roi, const prep::DiscretizedRoi& disc) {
    if (roi.empty()) throw Error(ErrorCode::EmptyRoi, "first-order features of an empty ROI");
    const auto& x = roi.values;
    const auto n = static_cast<double>(x.size());

    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double energy = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : x) {
        energy += v * v;
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    std::vector<double> hist(static_cast<std::size_t>(disc.gray_levels()), 0.0);
    for (int level : disc.levels()) hist[static_cast<std::size_t>(level - 1)] += 1.0;
    double entropy = 0.0;
    double uniformity = 0.0;
    for (double c : hist) {
        if (c == 0.0) continue;
        const double p = c / static_cast<double>(disc.size());
        entropy -= p * std::log2(p);
        uniformity += p * p;
    }

    const double p10 = percentile(sorted, 0.10);
    const double p90 = percentile(sorted, 0.90);
    std::vector<double> robust;
    std::copy_if(x.begin(), x.end(), std::back_inserter(robust), [&](double v) { return v >= p10 && v <= p90; });

    const double voxel_volume = roi.spacing[0] * roi.spacing[1] * roi.spacing[2];
    return {
        energy,
        energy * voxel_volume,
        entropy,
        sorted.front(),
        p10,
        p90,
        sorted.back(),
        mean,
        percentile(sorted, 0.5),
        percentile(sorted, 0.75) - percentile(sorted, 0.25),
        sorted.back() - sorted.front(),
        mean_abs_dev(x),
        robust.empty() ? 0.0 : mean_abs_dev(robust),
        std::sqrt(m2),
        m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0,
        m2 > 0.0 ? m4 / (m2 * m2) : 0.0,
        m2,
        uniformity,
    };
}

}  // namespace calcrad::features
