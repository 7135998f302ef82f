#include "calcrad/features.hpp"

#include <algorithm>

#include "calcrad/error.hpp"

namespace calcrad::features {

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::FirstOrder: return "firstorder";
        case Family::Shape: return "shape";
        case Family::Glcm: return "glcm";
        case Family::Glrlm: return "glrlm";
        case Family::Glszm: return "glszm";
        case Family::Gldm: return "gldm";
        case Family::Ngtdm: return "ngtdm";
    }
    return "unknown";
}

// Notation: x = raw HU values of the N ROI voxels; p(i) discretized-level histogram;
// P(i,j) family matrix; p = P / sum(P); log = log2 with 0 log 0 = 0.
const std::vector<CatalogEntry>& catalog() {
    using F = Family;
    static const std::vector<CatalogEntry> entries = {
        {F::FirstOrder, "Energy", "sum x^2"},
        {F::FirstOrder, "TotalEnergy", "voxel volume (mm^3) * Energy"},
        {F::FirstOrder, "Entropy", "-sum p(i) log p(i) over discretized levels"},
        {F::FirstOrder, "Minimum", "min x"},
        {F::FirstOrder, "10Percentile", "linear-interpolated 10th percentile, position 0.1 (N-1)"},
        {F::FirstOrder, "90Percentile", "linear-interpolated 90th percentile, position 0.9 (N-1)"},
        {F::FirstOrder, "Maximum", "max x"},
        {F::FirstOrder, "Mean", "sum x / N"},
        {F::FirstOrder, "Median", "linear-interpolated 50th percentile"},
        {F::FirstOrder, "InterquartileRange", "P75 - P25"},
        {F::FirstOrder, "Range", "max x - min x"},
        {F::FirstOrder, "MeanAbsoluteDeviation", "sum |x - mean| / N"},
        {F::FirstOrder, "RobustMeanAbsoluteDeviation", "MAD over voxels with P10 <= x <= P90"},
        {F::FirstOrder, "StandardDeviation", "sqrt(Variance)"},
        {F::FirstOrder, "Skewness", "m3 / m2^1.5 (central moments); 0 when m2 = 0"},
        {F::FirstOrder, "Kurtosis", "m4 / m2^2 (not excess); 0 when m2 = 0"},
        {F::FirstOrder, "Variance", "m2 = sum (x - mean)^2 / N (population)"},
        {F::FirstOrder, "Uniformity", "sum p(i)^2"},

        {F::Shape, "MeshVolume", "V = sum over mesh triangles of v0 . (v1 x v2) / 6"},
        {F::Shape, "VoxelVolume", "N * sx * sy * sz"},
        {F::Shape, "SurfaceArea", "A = sum over mesh triangles of |(v1 - v0) x (v2 - v0)| / 2"},
        {F::Shape, "SurfaceVolumeRatio", "A / V"},
        {F::Shape, "Sphericity", "(36 pi V^2)^(1/3) / A"},
        {F::Shape, "Maximum3DDiameter", "max distance between surface-voxel centres (mm)"},
        {F::Shape, "Maximum2DDiameterSlice", "max distance between surface-voxel centres sharing z"},
        {F::Shape, "Maximum2DDiameterColumn", "max distance between surface-voxel centres sharing y"},
        {F::Shape, "Maximum2DDiameterRow", "max distance between surface-voxel centres sharing x"},
        {F::Shape, "MajorAxisLength", "4 sqrt(l1), l1 >= l2 >= l3 eigenvalues of the voxel-centre covariance, l < 1e-12 l1 taken as 0"},
        {F::Shape, "MinorAxisLength", "4 sqrt(l2)"},
        {F::Shape, "LeastAxisLength", "4 sqrt(l3)"},
        {F::Shape, "Elongation", "sqrt(l2 / l1); 0 when l1 = 0"},
        {F::Shape, "Flatness", "sqrt(l3 / l1); 0 when l1 = 0"},

        {F::Glcm, "Autocorrelation", "sum p(i,j) i j"},
        {F::Glcm, "JointAverage", "mu_x = sum p(i,j) i"},
        {F::Glcm, "ClusterProminence", "sum (i + j - mu_x - mu_y)^4 p(i,j)"},
        {F::Glcm, "ClusterShade", "sum (i + j - mu_x - mu_y)^3 p(i,j)"},
        {F::Glcm, "ClusterTendency", "sum (i + j - mu_x - mu_y)^2 p(i,j)"},
        {F::Glcm, "Contrast", "sum (i - j)^2 p(i,j)"},
        {F::Glcm, "Correlation", "(sum p(i,j) i j - mu_x mu_y) / (sigma_x sigma_y); 1 when sigma_x sigma_y = 0"},
        {F::Glcm, "DifferenceAverage", "DA = sum k p_{x-y}(k)"},
        {F::Glcm, "DifferenceEntropy", "-sum p_{x-y}(k) log p_{x-y}(k)"},
        {F::Glcm, "DifferenceVariance", "sum (k - DA)^2 p_{x-y}(k)"},
        {F::Glcm, "JointEnergy", "sum p(i,j)^2"},
        {F::Glcm, "JointEntropy", "HXY = -sum p(i,j) log p(i,j)"},
        {F::Glcm, "Imc1", "(HXY - HXY1) / max(HX, HY); 0 when max(HX, HY) = 0"},
        {F::Glcm, "Imc2", "sqrt(1 - exp(-2 (HXY2 - HXY))); 0 when HXY2 <= HXY"},
        {F::Glcm, "Idm", "sum p_{x-y}(k) / (1 + k^2)"},
        {F::Glcm, "Idmn", "sum p_{x-y}(k) / (1 + k^2 / Ng^2)"},
        {F::Glcm, "Id", "sum p_{x-y}(k) / (1 + k)"},
        {F::Glcm, "Idn", "sum p_{x-y}(k) / (1 + k / Ng)"},
        {F::Glcm, "InverseVariance", "sum_{k >= 1} p_{x-y}(k) / k^2"},
        {F::Glcm, "MaximumProbability", "max p(i,j)"},
        {F::Glcm, "SumAverage", "sum k p_{x+y}(k)"},
        {F::Glcm, "SumEntropy", "-sum p_{x+y}(k) log p_{x+y}(k)"},
        {F::Glcm, "SumSquares", "sum (i - mu_x)^2 p(i,j)"},
        {F::Glcm, "MCC", "sqrt(second largest eigenvalue of Q), Q(i,j) = sum_k p(i,k) p(j,k) / (p_x(i) p_y(k)); 1 when one level"},

        {F::Glrlm, "ShortRunEmphasis", "sum P(i,j) / j^2 / Nr"},
        {F::Glrlm, "LongRunEmphasis", "sum P(i,j) j^2 / Nr"},
        {F::Glrlm, "GrayLevelNonUniformity", "sum_i (sum_j P(i,j))^2 / Nr"},
        {F::Glrlm, "GrayLevelNonUniformityNormalized", "sum_i (sum_j P(i,j))^2 / Nr^2"},
        {F::Glrlm, "RunLengthNonUniformity", "sum_j (sum_i P(i,j))^2 / Nr"},
        {F::Glrlm, "RunLengthNonUniformityNormalized", "sum_j (sum_i P(i,j))^2 / Nr^2"},
        {F::Glrlm, "RunPercentage", "Nr / Np"},
        {F::Glrlm, "GrayLevelVariance", "sum p(i,j) (i - mu_i)^2"},
        {F::Glrlm, "RunVariance", "sum p(i,j) (j - mu_j)^2"},
        {F::Glrlm, "RunEntropy", "-sum p(i,j) log p(i,j)"},
        {F::Glrlm, "LowGrayLevelRunEmphasis", "sum P(i,j) / i^2 / Nr"},
        {F::Glrlm, "HighGrayLevelRunEmphasis", "sum P(i,j) i^2 / Nr"},
        {F::Glrlm, "ShortRunLowGrayLevelEmphasis", "sum P(i,j) / (i^2 j^2) / Nr"},
        {F::Glrlm, "ShortRunHighGrayLevelEmphasis", "sum P(i,j) i^2 / j^2 / Nr"},
        {F::Glrlm, "LongRunLowGrayLevelEmphasis", "sum P(i,j) j^2 / i^2 / Nr"},
        {F::Glrlm, "LongRunHighGrayLevelEmphasis", "sum P(i,j) i^2 j^2 / Nr"},

        {F::Glszm, "SmallAreaEmphasis", "sum P(i,j) / j^2 / Nz"},
        {F::Glszm, "LargeAreaEmphasis", "sum P(i,j) j^2 / Nz"},
        {F::Glszm, "GrayLevelNonUniformity", "sum_i (sum_j P(i,j))^2 / Nz"},
        {F::Glszm, "GrayLevelNonUniformityNormalized", "sum_i (sum_j P(i,j))^2 / Nz^2"},
        {F::Glszm, "SizeZoneNonUniformity", "sum_j (sum_i P(i,j))^2 / Nz"},
        {F::Glszm, "SizeZoneNonUniformityNormalized", "sum_j (sum_i P(i,j))^2 / Nz^2"},
        {F::Glszm, "ZonePercentage", "Nz / Np"},
        {F::Glszm, "GrayLevelVariance", "sum p(i,j) (i - mu_i)^2"},
        {F::Glszm, "ZoneVariance", "sum p(i,j) (j - mu_j)^2"},
        {F::Glszm, "ZoneEntropy", "-sum p(i,j) log p(i,j)"},
        {F::Glszm, "LowGrayLevelZoneEmphasis", "sum P(i,j) / i^2 / Nz"},
        {F::Glszm, "HighGrayLevelZoneEmphasis", "sum P(i,j) i^2 / Nz"},
        {F::Glszm, "SmallAreaLowGrayLevelEmphasis", "sum P(i,j) / (i^2 j^2) / Nz"},
        {F::Glszm, "SmallAreaHighGrayLevelEmphasis", "sum P(i,j) i^2 / j^2 / Nz"},
        {F::Glszm, "LargeAreaLowGrayLevelEmphasis", "sum P(i,j) j^2 / i^2 / Nz"},
        {F::Glszm, "LargeAreaHighGrayLevelEmphasis", "sum P(i,j) i^2 j^2 / Nz"},

        {F::Gldm, "SmallDependenceEmphasis", "sum P(i,j) / j^2 / Nz, j = dependent neighbours + 1"},
        {F::Gldm, "LargeDependenceEmphasis", "sum P(i,j) j^2 / Nz"},
        {F::Gldm, "GrayLevelNonUniformity", "sum_i (sum_j P(i,j))^2 / Nz"},
        {F::Gldm, "DependenceNonUniformity", "sum_j (sum_i P(i,j))^2 / Nz"},
        {F::Gldm, "DependenceNonUniformityNormalized", "sum_j (sum_i P(i,j))^2 / Nz^2"},
        {F::Gldm, "GrayLevelVariance", "sum p(i,j) (i - mu_i)^2"},
        {F::Gldm, "DependenceVariance", "sum p(i,j) (j - mu_j)^2"},
        {F::Gldm, "DependenceEntropy", "-sum p(i,j) log p(i,j)"},
        {F::Gldm, "LowGrayLevelEmphasis", "sum P(i,j) / i^2 / Nz"},
        {F::Gldm, "HighGrayLevelEmphasis", "sum P(i,j) i^2 / Nz"},
        {F::Gldm, "SmallDependenceLowGrayLevelEmphasis", "sum P(i,j) / (i^2 j^2) / Nz"},
        {F::Gldm, "SmallDependenceHighGrayLevelEmphasis", "sum P(i,j) i^2 / j^2 / Nz"},
        {F::Gldm, "LargeDependenceLowGrayLevelEmphasis", "sum P(i,j) j^2 / i^2 / Nz"},
        {F::Gldm, "LargeDependenceHighGrayLevelEmphasis", "sum P(i,j) i^2 j^2 / Nz"},

        {F::Ngtdm, "Coarseness", "1 / sum p_i s_i; 1e6 when the sum is 0"},
        {F::Ngtdm, "Contrast", "[sum_{i,j} p_i p_j (i - j)^2 / (Ngp (Ngp - 1))] [sum s_i / Nvp]; 0 when Ngp <= 1"},
        {F::Ngtdm, "Busyness", "sum p_i s_i / sum_{i,j} |i p_i - j p_j|; 0 when the denominator is 0"},
        {F::Ngtdm, "Complexity", "sum_{i,j} |i - j| (p_i s_i + p_j s_j) / (p_i + p_j) / Nvp"},
        {F::Ngtdm, "Strength", "sum_{i,j} (p_i + p_j) (i - j)^2 / sum s_i; 0 when sum s_i = 0"},
    };
    return entries;
}

std::string qualified_name(const CatalogEntry& e) { return std::string(to_string(e.family)) + "_" + std::string(e.name); }

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : catalog()) out.push_back(qualified_name(e));
        return out;
    }();
    return names;
}

double FeatureVector::get(std::string_view name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(ErrorCode::UnknownColumn, std::string(name));
    return values[static_cast<std::size_t>(it - names.begin())];
}

}  // namespace calcrad::features
