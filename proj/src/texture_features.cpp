#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "calcrad/error.hpp"
#include "calcrad/features.hpp"

namespace calcrad::features {

namespace {

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

std::vector<double> glcm_single(const texture::CountMatrix& counts, int ng) {
    const double total = static_cast<double>(counts.total());
    Eigen::MatrixXd p(ng, ng);
    for (int i = 0; i < ng; ++i)
        for (int j = 0; j < ng; ++j) p(i, j) = static_cast<double>(counts(i, j)) / total;

    const Eigen::VectorXd px = p.rowwise().sum();
    const Eigen::VectorXd py = p.colwise().sum().transpose();
    const Eigen::VectorXd level = Eigen::VectorXd::LinSpaced(ng, 1.0, ng);
    const double mux = px.dot(level);
    const double muy = py.dot(level);
    const double varx = px.dot((level.array() - mux).square().matrix());
    const double vary = py.dot((level.array() - muy).square().matrix());

    // Marginals of i + j (index k - 2) and |i - j| (index k).
    Eigen::VectorXd psum = Eigen::VectorXd::Zero(2 * ng - 1);
    Eigen::VectorXd pdiff = Eigen::VectorXd::Zero(ng);
    double autocorr = 0.0;
    double prominence = 0.0;
    double shade = 0.0;
    double tendency = 0.0;
    double hxy = 0.0;
    double hxy1 = 0.0;
    double hxy2 = 0.0;
    for (int i = 0; i < ng; ++i) {
        for (int j = 0; j < ng; ++j) {
            const double v = p(i, j);
            const double li = i + 1.0;
            const double lj = j + 1.0;
            const double c = li + lj - mux - muy;
            psum(i + j) += v;
            pdiff(std::abs(i - j)) += v;
            autocorr += v * li * lj;
            tendency += v * c * c;
            shade += v * c * c * c;
            prominence += v * c * c * c * c;
            hxy -= xlog2x(v);
            const double pp = px(i) * py(j);
            if (pp > 0.0) {
                hxy1 -= v * std::log2(pp);
                hxy2 -= pp * std::log2(pp);
            }
        }
    }
    double hx = 0.0;
    double hy = 0.0;
    for (int i = 0; i < ng; ++i) {
        hx -= xlog2x(px(i));
        hy -= xlog2x(py(i));
    }

    double diff_avg = 0.0;
    double diff_ent = 0.0;
    double idm = 0.0;
    double idmn = 0.0;
    double id = 0.0;
    double idn = 0.0;
    double inv_var = 0.0;
    for (int k = 0; k < ng; ++k) {
        const double v = pdiff(k);
        diff_avg += k * v;
        diff_ent -= xlog2x(v);
        idm += v / (1.0 + k * k);
        idmn += v / (1.0 + static_cast<double>(k * k) / (static_cast<double>(ng) * ng));
        id += v / (1.0 + k);
        idn += v / (1.0 + static_cast<double>(k) / ng);
        if (k > 0) inv_var += v / (static_cast<double>(k) * k);
    }
    double diff_var = 0.0;
    for (int k = 0; k < ng; ++k) diff_var += (k - diff_avg) * (k - diff_avg) * pdiff(k);

    double sum_avg = 0.0;
    double sum_ent = 0.0;
    for (int k = 0; k < 2 * ng - 1; ++k) {
        sum_avg += (k + 2.0) * psum(k);
        sum_ent -= xlog2x(psum(k));
    }

    const double sigma = std::sqrt(varx * vary);
    const double correlation = sigma > 0.0 ? (autocorr - mux * muy) / sigma : 1.0;
    const double hmax = std::max(hx, hy);
    const double imc1 = hmax > 0.0 ? (hxy - hxy1) / hmax : 0.0;
    const double imc2 = hxy2 > hxy ? std::sqrt(1.0 - std::exp(-2.0 * (hxy2 - hxy))) : 0.0;

    // MCC: Q = D^-1 P D^-1 P^T is similar to M^2 with M = D^-1/2 P D^-1/2 (P symmetric).
    std::vector<int> present;
    for (int i = 0; i < ng; ++i)
        if (px(i) > 0.0) present.push_back(i);
    double mcc = 1.0;
    if (present.size() > 1) {
        const auto m = static_cast<Eigen::Index>(present.size());
        Eigen::MatrixXd sym(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b)
                sym(a, b) = p(present[a], present[b]) / std::sqrt(px(present[a]) * px(present[b]));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym * sym, Eigen::EigenvaluesOnly);
        mcc = std::sqrt(std::max(0.0, eig.eigenvalues()(m - 2)));
    }

    return {
        autocorr,
        mux,
        prominence,
        shade,
        tendency,
        (p.array() * (level.replicate(1, ng).array() - level.transpose().replicate(ng, 1).array()).square()).sum(),
        correlation,
        diff_avg,
        diff_ent,
        diff_var,
        p.array().square().sum(),
        hxy,
        imc1,
        imc2,
        idm,
        idmn,
        id,
        idn,
        inv_var,
        p.maxCoeff(),
        sum_avg,
        sum_ent,
        varx,
        mcc,
    };
}

// Shared emphasis/non-uniformity descriptors for run, zone and dependence matrices.
// Column c carries size (c + 1). Returns in GLRLM/GLSZM order.
struct SizeMatrixStats {
    double small_emph = 0, large_emph = 0, gln = 0, glnn = 0, sn = 0, snn = 0, gl_var = 0, size_var = 0,
           entropy = 0, low_gl = 0, high_gl = 0, small_low = 0, small_high = 0, large_low = 0, large_high = 0;
    double total = 0;
};

SizeMatrixStats size_matrix_stats(const texture::CountMatrix& m) {
    SizeMatrixStats s;
    s.total = static_cast<double>(m.total());
    if (s.total <= 0.0) return s;
    std::vector<double> row_sum(m.rows, 0.0);
    std::vector<double> col_sum(m.cols, 0.0);
    double mu_i = 0.0;
    double mu_j = 0.0;
    for (int r = 0; r < m.rows; ++r) {
        const double i = r + 1.0;
        const double i2 = i * i;
        for (int c = 0; c < m.cols; ++c) {
            const double v = static_cast<double>(m(r, c));
            if (v == 0.0) continue;
            const double j = c + 1.0;
            const double j2 = j * j;
            row_sum[r] += v;
            col_sum[c] += v;
            s.small_emph += v / j2;
            s.large_emph += v * j2;
            s.low_gl += v / i2;
            s.high_gl += v * i2;
            s.small_low += v / (i2 * j2);
            s.small_high += v * i2 / j2;
            s.large_low += v * j2 / i2;
            s.large_high += v * i2 * j2;
            const double p = v / s.total;
            s.entropy -= p * std::log2(p);
            mu_i += p * i;
            mu_j += p * j;
        }
    }
    for (double v : row_sum) s.gln += v * v;
    for (double v : col_sum) s.sn += v * v;
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            const double p = static_cast<double>(m(r, c)) / s.total;
            s.gl_var += p * (r + 1.0 - mu_i) * (r + 1.0 - mu_i);
            s.size_var += p * (c + 1.0 - mu_j) * (c + 1.0 - mu_j);
        }
    }
    for (double* v : {&s.small_emph, &s.large_emph, &s.low_gl, &s.high_gl, &s.small_low, &s.small_high, &s.large_low,
                      &s.large_high, &s.gln, &s.sn}) {
        *v /= s.total;
    }
    s.glnn = s.gln / s.total;
    s.snn = s.sn / s.total;
    return s;
}

std::vector<double> run_zone_vector(const SizeMatrixStats& s, double voxel_count) {
    return {s.small_emph, s.large_emph, s.gln,     s.glnn,       s.sn,        s.snn,       s.total / voxel_count,
            s.gl_var,     s.size_var,   s.entropy, s.low_gl,     s.high_gl,   s.small_low, s.small_high,
            s.large_low,  s.large_high};
}

}  // namespace

std::vector<double> glcm_features(const texture::Glcm& m) {
    if (m.gray_levels < 1) throw Error(ErrorCode::DegenerateMatrix, "GLCM without gray levels");
    std::vector<double> acc(kGlcmCount, 0.0);
    int used = 0;
    for (const auto& counts : m.per_direction) {
        if (counts.total() == 0) continue;
        const auto v = glcm_single(counts, m.gray_levels);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
        ++used;
    }
    if (used == 0) {
        // No voxel pair at this offset (e.g. single-voxel ROI).
        acc[6] = 1.0;   // Correlation
        acc[23] = 1.0;  // MCC
        return acc;
    }
    for (auto& v : acc) v /= used;
    return acc;
}

std::vector<double> glrlm_features(const texture::Glrlm& m) {
    if (m.gray_levels < 1 || m.voxel_count <= 0) throw Error(ErrorCode::DegenerateMatrix, "empty GLRLM");
    std::vector<double> acc(kGlrlmCount, 0.0);
    int used = 0;
    for (const auto& counts : m.per_direction) {
        const auto s = size_matrix_stats(counts);
        if (s.total <= 0.0) continue;
        const auto v = run_zone_vector(s, static_cast<double>(m.voxel_count));
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
        ++used;
    }
    if (used > 0)
        for (auto& v : acc) v /= used;
    return acc;
}

std::vector<double> glszm_features(const texture::Glszm& m) {
    if (m.gray_levels < 1 || m.voxel_count <= 0) throw Error(ErrorCode::DegenerateMatrix, "empty GLSZM");
    return run_zone_vector(size_matrix_stats(m.counts), static_cast<double>(m.voxel_count));
}

std::vector<double> gldm_features(const texture::Gldm& m) {
    if (m.gray_levels < 1) throw Error(ErrorCode::DegenerateMatrix, "empty GLDM");
    const auto s = size_matrix_stats(m.counts);
    if (s.total <= 0.0) throw Error(ErrorCode::DegenerateMatrix, "empty GLDM");
    return {s.small_emph, s.large_emph, s.gln,     s.sn,         s.snn,       s.gl_var,    s.size_var,
            s.entropy,    s.low_gl,     s.high_gl, s.small_low,  s.small_high, s.large_low, s.large_high};
}

std::vector<double> ngtdm_features(const texture::Ngtdm& t) {
    if (t.gray_levels < 1) throw Error(ErrorCode::DegenerateMatrix, "empty NGTDM");
    const auto p = t.p();
    std::vector<int> present;
    for (int i = 0; i < t.gray_levels; ++i)
        if (p[i] > 0.0) present.push_back(i);

    double ps = 0.0;
    double s_total = 0.0;
    for (int i = 0; i < t.gray_levels; ++i) {
        ps += p[i] * t.s[i];
        s_total += t.s[i];
    }
    const double nvp = static_cast<double>(t.valid_voxels);
    const auto ngp = static_cast<double>(present.size());

    double contrast_sum = 0.0;
    double busy_den = 0.0;
    double complexity = 0.0;
    double strength_num = 0.0;
    for (int a : present) {
        for (int b : present) {
            const double i = a + 1.0;
            const double j = b + 1.0;
            contrast_sum += p[a] * p[b] * (i - j) * (i - j);
            busy_den += std::abs(i * p[a] - j * p[b]);
            complexity += std::abs(i - j) * (p[a] * t.s[a] + p[b] * t.s[b]) / (p[a] + p[b]);
            strength_num += (p[a] + p[b]) * (i - j) * (i - j);
        }
    }
    return {
        ps > 0.0 ? 1.0 / ps : kCoarsenessCap,
        ngp > 1.0 ? contrast_sum / (ngp * (ngp - 1.0)) * (s_total / nvp) : 0.0,
        busy_den > 0.0 ? ps / busy_den : 0.0,
        nvp > 0.0 ? complexity / nvp : 0.0,
        s_total > 0.0 ? strength_num / s_total : 0.0,
    };
}

}  // namespace calcrad::features
