#include "feature_oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

namespace oracle {

namespace {

double plog(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double rank = q * (static_cast<double>(v.size()) - 1.0);
    const double lo = std::floor(rank), hi = std::ceil(rank);
    return v[static_cast<std::size_t>(lo)] + (rank - lo) * (v[static_cast<std::size_t>(hi)] - v[static_cast<std::size_t>(lo)]);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::int64_t grid_total(const Grid& g) {
    std::int64_t t = 0;
    for (const auto& row : g)
        for (auto v : row) t += v;
    return t;
}

std::vector<double> glcm_one(const Grid& c) {
    const int ng = static_cast<int>(c.size());
    const double total = static_cast<double>(grid_total(c));
    auto p = [&](int i, int j) { return static_cast<double>(c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]) / total; };
    auto px = [&](int i) { double s = 0; for (int j = 1; j <= ng; ++j) s += p(i, j); return s; };
    auto py = [&](int j) { double s = 0; for (int i = 1; i <= ng; ++i) s += p(i, j); return s; };

    double mux = 0, muy = 0;
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            mux += i * p(i, j);
            muy += j * p(i, j);
        }
    double sx2 = 0, sy2 = 0, cov = 0;
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            sx2 += (i - mux) * (i - mux) * p(i, j);
            sy2 += (j - muy) * (j - muy) * p(i, j);
            cov += (i - mux) * (j - muy) * p(i, j);
        }

    double autoc = 0, prom = 0, shade = 0, tend = 0, contrast = 0, energy = 0, jent = 0, idm = 0, idmn = 0, id = 0,
           idn = 0, ivar = 0, maxp = 0;
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            const double v = p(i, j);
            autoc += i * j * v;
            prom += std::pow(i + j - mux - muy, 4) * v;
            shade += std::pow(i + j - mux - muy, 3) * v;
            tend += std::pow(i + j - mux - muy, 2) * v;
            contrast += (i - j) * (i - j) * v;
            energy += v * v;
            jent -= plog(v);
            idm += v / (1.0 + (i - j) * (i - j));
            idmn += v / (1.0 + static_cast<double>((i - j) * (i - j)) / (ng * ng));
            id += v / (1.0 + std::abs(i - j));
            idn += v / (1.0 + static_cast<double>(std::abs(i - j)) / ng);
            if (i != j) ivar += v / ((i - j) * (i - j));
            maxp = std::max(maxp, v);
        }

    // Difference and sum distributions built by scanning all cells.
    double da = 0, dent = 0, dvar = 0;
    for (int k = 0; k < ng; ++k) {
        double pk = 0;
        for (int i = 1; i <= ng; ++i)
            for (int j = 1; j <= ng; ++j)
                if (std::abs(i - j) == k) pk += p(i, j);
        da += k * pk;
        dent -= plog(pk);
    }
    for (int k = 0; k < ng; ++k) {
        double pk = 0;
        for (int i = 1; i <= ng; ++i)
            for (int j = 1; j <= ng; ++j)
                if (std::abs(i - j) == k) pk += p(i, j);
        dvar += (k - da) * (k - da) * pk;
    }
    double sa = 0, sent = 0;
    for (int k = 2; k <= 2 * ng; ++k) {
        double pk = 0;
        for (int i = 1; i <= ng; ++i)
            for (int j = 1; j <= ng; ++j)
                if (i + j == k) pk += p(i, j);
        sa += k * pk;
        sent -= plog(pk);
    }

    double hx = 0, hy = 0, hxy1 = 0, hxy2 = 0;
    for (int i = 1; i <= ng; ++i) {
        hx -= plog(px(i));
        hy -= plog(py(i));
    }
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            const double q = px(i) * py(j);
            if (q > 0) {
                hxy1 -= p(i, j) * std::log2(q);
                hxy2 -= q * std::log2(q);
            }
        }
    const double imc1 = std::max(hx, hy) > 0 ? (jent - hxy1) / std::max(hx, hy) : 0.0;
    const double imc2 = hxy2 > jent ? std::sqrt(1.0 - std::exp(-2.0 * (hxy2 - jent))) : 0.0;
    const double corr = sx2 * sy2 > 0 ? cov / std::sqrt(sx2 * sy2) : 1.0;

    int present = 0;
    for (int i = 1; i <= ng; ++i)
        if (px(i) > 0) ++present;
    double mcc = 1.0;
    if (present >= 2) {
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(ng, ng);
        for (int i = 1; i <= ng; ++i)
            for (int j = 1; j <= ng; ++j)
                for (int k = 1; k <= ng; ++k)
                    if (px(i) > 0 && py(k) > 0) q(i - 1, j - 1) += p(i, k) * p(j, k) / (px(i) * py(k));
        Eigen::EigenSolver<Eigen::MatrixXd> es(q, false);
        std::vector<double> ev;
        for (Eigen::Index k = 0; k < ng; ++k) ev.push_back(es.eigenvalues()[k].real());
        std::sort(ev.rbegin(), ev.rend());
        mcc = std::sqrt(std::max(0.0, ev[1]));
    }

    return {autoc, mux, prom, shade, tend, contrast, corr, da, dent, dvar, energy, jent, imc1, imc2,
            idm,   idmn, id,  idn,   ivar, maxp,     sa,   sent, sx2, mcc};
}

// Emphasis-style family on a count grid whose column c is size c+1.
struct SizeFamily {
    double se, le, gln, glnn, sn, snn, glv, sv, ent, lgl, hgl, sl, sh, ll, lh, total;
};

SizeFamily size_family(const Grid& g) {
    SizeFamily f{};
    const double n = static_cast<double>(grid_total(g));
    f.total = n;
    const int ng = static_cast<int>(g.size());
    const int ns = ng ? static_cast<int>(g[0].size()) : 0;
    auto P = [&](int i, int j) { return static_cast<double>(g[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]); };
    double mu_i = 0, mu_j = 0;
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ns; ++j) {
            const double v = P(i, j);
            f.se += v / (j * j) / n;
            f.le += v * j * j / n;
            f.lgl += v / (i * i) / n;
            f.hgl += v * i * i / n;
            f.sl += v / (static_cast<double>(i) * i * j * j) / n;
            f.sh += v * i * i / (static_cast<double>(j) * j) / n;
            f.ll += v * j * j / (static_cast<double>(i) * i) / n;
            f.lh += v * i * i * static_cast<double>(j) * j / n;
            f.ent -= plog(v / n);
            mu_i += i * v / n;
            mu_j += j * v / n;
        }
    for (int i = 1; i <= ng; ++i) {
        double row = 0;
        for (int j = 1; j <= ns; ++j) row += P(i, j);
        f.gln += row * row / n;
        f.glnn += row * row / (n * n);
    }
    for (int j = 1; j <= ns; ++j) {
        double col = 0;
        for (int i = 1; i <= ng; ++i) col += P(i, j);
        f.sn += col * col / n;
        f.snn += col * col / (n * n);
    }
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ns; ++j) {
            f.glv += (i - mu_i) * (i - mu_i) * P(i, j) / n;
            f.sv += (j - mu_j) * (j - mu_j) * P(i, j) / n;
        }
    return f;
}

std::vector<double> run_zone(const SizeFamily& f, double voxels) {
    return {f.se, f.le, f.gln, f.glnn, f.sn, f.snn, f.total / voxels, f.glv, f.sv, f.ent,
            f.lgl, f.hgl, f.sl, f.sh, f.ll, f.lh};
}

using V3 = std::array<double, 3>;
V3 sub(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dist(const V3& a, const V3& b) {
    const V3 d = sub(a, b);
    return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
}

}  // namespace

std::vector<double> first_order(const std::vector<double>& x, const std::vector<int>& levels, double voxel_volume) {
    const double n = static_cast<double>(x.size());
    const double mean = mean_of(x);
    double energy = 0, var = 0, m3 = 0, m4 = 0, mad = 0;
    for (double v : x) {
        energy += v * v;
        var += std::pow(v - mean, 2) / n;
        m3 += std::pow(v - mean, 3) / n;
        m4 += std::pow(v - mean, 4) / n;
        mad += std::abs(v - mean) / n;
    }
    std::map<int, int> hist;
    for (int l : levels) ++hist[l];
    double entropy = 0, uniformity = 0;
    for (const auto& [l, c] : hist) {
        const double p = c / static_cast<double>(levels.size());
        entropy -= p * std::log2(p);
        uniformity += p * p;
    }
    const double p10 = quantile(x, 0.1), p90 = quantile(x, 0.9);
    std::vector<double> mid;
    for (double v : x)
        if (v >= p10 && v <= p90) mid.push_back(v);
    double rmad = 0;
    if (!mid.empty()) {
        const double mm = mean_of(mid);
        for (double v : mid) rmad += std::abs(v - mm) / static_cast<double>(mid.size());
    }
    const double mn = *std::min_element(x.begin(), x.end()), mx = *std::max_element(x.begin(), x.end());
    return {energy, energy * voxel_volume, entropy, mn, p10, p90, mx, mean, quantile(x, 0.5),
            quantile(x, 0.75) - quantile(x, 0.25), mx - mn, mad, rmad, std::sqrt(var),
            var > 0 ? m3 / std::pow(var, 1.5) : 0.0, var > 0 ? m4 / (var * var) : 0.0, var, uniformity};
}

std::vector<double> glcm_features(const std::vector<Grid>& per_direction) {
    std::vector<double> acc(24, 0.0);
    int used = 0;
    for (const auto& g : per_direction) {
        if (grid_total(g) == 0) continue;
        const auto v = glcm_one(g);
        for (std::size_t k = 0; k < 24; ++k) acc[k] += v[k];
        ++used;
    }
    if (used == 0) {
        acc[6] = 1.0;
        acc[23] = 1.0;
        return acc;
    }
    for (auto& v : acc) v /= used;
    return acc;
}

std::vector<double> glrlm_features(const std::vector<Grid>& per_direction, double voxel_count) {
    std::vector<double> acc(16, 0.0);
    int used = 0;
    for (const auto& g : per_direction) {
        if (grid_total(g) == 0) continue;
        const auto v = run_zone(size_family(g), voxel_count);
        for (std::size_t k = 0; k < 16; ++k) acc[k] += v[k];
        ++used;
    }
    for (auto& v : acc) v /= used;
    return acc;
}

std::vector<double> glszm_features(const Grid& zones, double voxel_count) {
    return run_zone(size_family(zones), voxel_count);
}

std::vector<double> gldm_features(const Grid& dependence) {
    const auto f = size_family(dependence);
    return {f.se, f.le, f.gln, f.sn, f.snn, f.glv, f.sv, f.ent, f.lgl, f.hgl, f.sl, f.sh, f.ll, f.lh};
}

std::vector<double> ngtdm_features(const NgtdmRef& t) {
    const int ng = static_cast<int>(t.n.size());
    double nvp = 0;
    for (auto c : t.n) nvp += static_cast<double>(c);
    std::vector<double> p(static_cast<std::size_t>(ng));
    for (int i = 0; i < ng; ++i) p[static_cast<std::size_t>(i)] = nvp > 0 ? static_cast<double>(t.n[static_cast<std::size_t>(i)]) / nvp : 0.0;
    auto P = [&](int i) { return p[static_cast<std::size_t>(i - 1)]; };
    auto S = [&](int i) { return t.s[static_cast<std::size_t>(i - 1)]; };
    double ps = 0, ssum = 0;
    int ngp = 0;
    for (int i = 1; i <= ng; ++i) {
        ps += P(i) * S(i);
        ssum += S(i);
        if (P(i) > 0) ++ngp;
    }
    double c2 = 0, bden = 0, cx = 0, st = 0;
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            if (P(i) == 0 || P(j) == 0) continue;
            c2 += P(i) * P(j) * (i - j) * (i - j);
            bden += std::abs(i * P(i) - j * P(j));
            cx += std::abs(i - j) * (P(i) * S(i) + P(j) * S(j)) / (P(i) + P(j));
            st += (P(i) + P(j)) * (i - j) * (i - j);
        }
    return {ps > 0 ? 1.0 / ps : 1e6, ngp > 1 ? c2 / (ngp * (ngp - 1.0)) * ssum / nvp : 0.0, bden > 0 ? ps / bden : 0.0,
            nvp > 0 ? cx / nvp : 0.0, ssum > 0 ? st / ssum : 0.0};
}

MeshMeasures mesh_measures(const calcrad::mesh::TriangleMesh& m) {
    V3 c{0, 0, 0};
    for (const auto& v : m.vertices)
        for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] += v[static_cast<std::size_t>(k)] / static_cast<double>(m.vertices.size());
    MeshMeasures r;
    for (const auto& t : m.triangles) {
        const V3 a = sub(m.vertices[static_cast<std::size_t>(t[0])], c);
        const V3 b = sub(m.vertices[static_cast<std::size_t>(t[1])], c);
        const V3 d = sub(m.vertices[static_cast<std::size_t>(t[2])], c);
        r.volume += (a[0] * (b[1] * d[2] - b[2] * d[1]) - a[1] * (b[0] * d[2] - b[2] * d[0]) + a[2] * (b[0] * d[1] - b[1] * d[0])) / 6.0;
        const double e1 = dist(a, b), e2 = dist(b, d), e3 = dist(d, a);
        const double s = (e1 + e2 + e3) / 2.0;
        r.area += std::sqrt(std::max(0.0, s * (s - e1) * (s - e2) * (s - e3)));
    }
    return r;
}

bool mesh_is_closed(const calcrad::mesh::TriangleMesh& m) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& t : m.triangles) {
        for (int k = 0; k < 3; ++k) ++directed[{t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)]}];
    }
    for (const auto& [e, count] : directed) {
        if (count != 1) return false;
        const auto rev = directed.find({e.second, e.first});
        if (rev == directed.end() || rev->second != 1) return false;
    }
    return true;
}

std::array<double, 3> symmetric_eigenvalues(const std::array<std::array<double, 3>, 3>& a) {
    const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    std::array<double, 3> ev;
    if (p1 == 0.0) {
        ev = {a[0][0], a[1][1], a[2][2]};
    } else {
        const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
        const double p2 = std::pow(a[0][0] - q, 2) + std::pow(a[1][1] - q, 2) + std::pow(a[2][2] - q, 2) + 2.0 * p1;
        const double p = std::sqrt(p2 / 6.0);
        std::array<std::array<double, 3>, 3> b{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - (i == j ? q : 0.0)) / p;
        const double det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                           b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        const double r = std::clamp(det / 2.0, -1.0, 1.0);
        const double phi = std::acos(r) / 3.0;
        const double e1 = q + 2.0 * p * std::cos(phi);
        const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
        ev = {e1, 3.0 * q - e1 - e3, e3};
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> shape(const std::vector<calcrad::Index3>& voxels, const calcrad::Spacing& sp, const MeshMeasures& mesh) {
    std::set<std::tuple<int, int, int>> in;
    for (const auto& v : voxels) in.insert({v.x, v.y, v.z});
    auto pos = [&](const calcrad::Index3& v) { return V3{v.x * sp[0], v.y * sp[1], v.z * sp[2]}; };

    std::vector<calcrad::Index3> surface;
    for (const auto& v : voxels) {
        int inside_faces = 0;
        for (const auto& [dx, dy, dz] : {std::tuple{1, 0, 0}, std::tuple{-1, 0, 0}, std::tuple{0, 1, 0}, std::tuple{0, -1, 0},
                                         std::tuple{0, 0, 1}, std::tuple{0, 0, -1}})
            inside_faces += in.count({v.x + dx, v.y + dy, v.z + dz}) ? 1 : 0;
        if (inside_faces < 6) surface.push_back(v);
    }
    double d3 = 0, dz = 0, dy = 0, dx = 0;
    for (const auto& a : surface)
        for (const auto& b : surface) {
            const double d = dist(pos(a), pos(b));
            d3 = std::max(d3, d);
            if (a.z == b.z) dz = std::max(dz, d);
            if (a.y == b.y) dy = std::max(dy, d);
            if (a.x == b.x) dx = std::max(dx, d);
        }

    const double n = static_cast<double>(voxels.size());
    V3 mean{0, 0, 0};
    for (const auto& v : voxels)
        for (int k = 0; k < 3; ++k) mean[static_cast<std::size_t>(k)] += pos(v)[static_cast<std::size_t>(k)] / n;
    std::array<std::array<double, 3>, 3> cov{};
    for (const auto& v : voxels) {
        const V3 c = sub(pos(v), mean);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)] / n;
    }
    auto ev = symmetric_eigenvalues(cov);
    // Eigenvalues below 1e-12 of the largest are round-off of an exact zero.
    for (auto& e : ev) e = e < 1e-12 * ev[2] ? 0.0 : e;
    const double least = ev[0], minor = ev[1], major = ev[2];

    return {mesh.volume,
            n * sp[0] * sp[1] * sp[2],
            mesh.area,
            mesh.area / mesh.volume,
            std::pow(36.0 * std::numbers::pi * mesh.volume * mesh.volume, 1.0 / 3.0) / mesh.area,
            d3,
            dz,
            dy,
            dx,
            4 * std::sqrt(major),
            4 * std::sqrt(minor),
            4 * std::sqrt(least),
            major > 0 ? std::sqrt(minor / major) : 0.0,
            major > 0 ? std::sqrt(least / major) : 0.0};
}

}  // namespace oracle
