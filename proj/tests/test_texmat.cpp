#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "calcrad/texmat.hpp"
#include "errors.hpp"
#include "support.hpp"

using namespace calcrad;
using texture::DirectionSet;
using texture::Offset;

namespace {

oracle::Grid to_grid(const texture::CountMatrix& m) {
    oracle::Grid g(static_cast<std::size_t>(m.rows), std::vector<std::int64_t>(static_cast<std::size_t>(m.cols)));
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
    return g;
}

prep::DiscretizedRoi slice(const std::vector<std::vector<int>>& rows) {
    std::vector<Index3> v;
    std::vector<int> l;
    for (std::size_t y = 0; y < rows.size(); ++y)
        for (std::size_t x = 0; x < rows[y].size(); ++x) {
            if (rows[y][x] == 0) continue;
            v.push_back({static_cast<int>(x), static_cast<int>(y), 0});
            l.push_back(rows[y][x]);
        }
    return prep::DiscretizedRoi(v, l);
}

}  // namespace

TEST_CASE("direction set") {
    const auto d = DirectionSet::all13();
    REQUIRE(d.size() == 13);
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& o : d.offsets()) {
        CHECK_FALSE((o.dx == 0 && o.dy == 0 && o.dz == 0));
        CHECK(std::abs(o.dx) <= 1);
        CHECK(std::abs(o.dy) <= 1);
        CHECK(std::abs(o.dz) <= 1);
        CHECK(seen.count({-o.dx, -o.dy, -o.dz}) == 0);
        seen.insert({o.dx, o.dy, o.dz});
    }
    CHECK(seen.size() == 13);
    CHECK(testing::code_of([] { DirectionSet({Offset{-1, 0, 0}}); }) == ErrorCode::BadRange);
    CHECK(testing::code_of([] { DirectionSet({Offset{0, 0, 0}}); }) == ErrorCode::BadRange);
}

TEST_CASE("GLCM worked examples") {
    const auto roi = slice({{1, 1}, {1, 2}});
    const auto g = texture::compute_glcm(roi, DirectionSet({Offset{0, 1, 0}}), 1);
    const auto& c = g.per_direction[0];
    CHECK(c(0, 0) == 2);
    CHECK(c(0, 1) == 1);
    CHECK(c(1, 0) == 1);
    CHECK(c(1, 1) == 0);

    const auto flat = texture::compute_glcm(slice({{1, 1, 1}, {1, 1, 1}}), DirectionSet::all13(), 1);
    for (const auto& m : flat.per_direction) {
        CHECK(m.rows == 1);
        CHECK(m.total() == m(0, 0));
    }
}

TEST_CASE("GLRLM worked examples") {
    const auto g = texture::compute_glrlm(slice({{1, 1, 2}}), DirectionSet({Offset{1, 0, 0}}));
    const auto& r = g.per_direction[0];
    CHECK(r(0, 1) == 1);
    CHECK(r(1, 0) == 1);
    CHECK(r.total() == 2);

    std::vector<Index3> line;
    for (int z = 0; z < 6; ++z) line.push_back({0, 0, z});
    const auto lg = texture::compute_glrlm(prep::DiscretizedRoi(line, std::vector<int>(6, 1)), DirectionSet({Offset{0, 0, 1}}));
    CHECK(lg.per_direction[0](0, 5) == 1);
    CHECK(lg.per_direction[0].total() == 1);
}

TEST_CASE("GLSZM worked examples") {
    const auto z = texture::compute_glszm(slice({{1, 1}, {2, 2}}));
    CHECK(z.counts(0, 1) == 1);
    CHECK(z.counts(1, 1) == 1);
    CHECK(z.counts.total() == 2);
    // Diagonal contact joins a zone under 26-connectivity.
    const auto diag = texture::compute_glszm(slice({{1, 0}, {0, 1}}));
    CHECK(diag.counts(0, 1) == 1);
}

TEST_CASE("GLDM worked examples") {
    const auto iso = texture::compute_gldm(prep::DiscretizedRoi({{0, 0, 0}}, {3}), 0);
    CHECK(iso.counts(2, 0) == 1);
    const auto pair = texture::compute_gldm(prep::DiscretizedRoi({{0, 0, 0}, {0, 1, 0}}, {1, 1}), 0);
    CHECK(pair.counts(0, 1) == 2);
    const auto tol = texture::compute_gldm(prep::DiscretizedRoi({{0, 0, 0}, {0, 1, 0}}, {1, 2}), 1);
    CHECK(tol.counts(0, 1) == 1);
    CHECK(tol.counts(1, 1) == 1);
}

TEST_CASE("NGTDM worked examples") {
    const auto t = texture::compute_ngtdm(prep::DiscretizedRoi({{0, 0, 0}, {0, 1, 0}}, {1, 2}));
    CHECK(t.n == std::vector<std::int64_t>{1, 1});
    CHECK(t.s[0] == 1.0);
    CHECK(t.s[1] == 1.0);
    const auto c = texture::compute_ngtdm(slice({{2, 2}, {2, 2}}));
    for (double s : c.s) CHECK(s == 0.0);
    // An isolated voxel has no neighbourhood.
    const auto lone = texture::compute_ngtdm(slice({{1, 0, 2}}));
    CHECK(lone.valid_voxels == 0);
}

TEST_CASE("matrices equal exhaustive oracles on random ROIs") {
    std::mt19937_64 gen(2024);
    const auto dirs = DirectionSet::all13();
    for (int trial = 0; trial < 60; ++trial) {
        const auto r = testing::random_roi(gen, 4, 4, 3, 5);
        const int dist = 1 + trial % 2;
        const auto glcm = texture::compute_glcm(r.disc, dirs, dist);
        const auto glrlm = texture::compute_glrlm(r.disc, dirs);
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const auto& o = dirs.offsets()[d];
            CHECK(to_grid(glcm.per_direction[d]) == oracle::glcm(r.ref, o.dx, o.dy, o.dz, dist));
            CHECK(to_grid(glrlm.per_direction[d]) == oracle::glrlm(r.ref, o.dx, o.dy, o.dz, glrlm.max_run));
        }
        const auto glszm = texture::compute_glszm(r.disc);
        CHECK(to_grid(glszm.counts) == oracle::glszm(r.ref, glszm.max_zone));
        for (int alpha : {0, 1}) {
            auto ref = oracle::gldm(r.ref, alpha);
            const auto g = texture::compute_gldm(r.disc, alpha);
            for (auto& row : ref) row.resize(static_cast<std::size_t>(g.counts.cols));
            CHECK(to_grid(g.counts) == ref);
        }
        const auto ng = texture::compute_ngtdm(r.disc);
        const auto nref = oracle::ngtdm(r.ref);
        CHECK(ng.n == nref.n);
        for (std::size_t i = 0; i < nref.s.size(); ++i) CHECK(testing::close(ng.s[i], nref.s[i], 1e-12));
    }
}

TEST_CASE("matrix invariants on random ROIs") {
    std::mt19937_64 gen(77);
    const auto dirs = DirectionSet::all13();
    for (int trial = 0; trial < 40; ++trial) {
        const auto r = testing::random_roi(gen, 6, 6, 4, 5);
        const auto n = static_cast<std::int64_t>(r.disc.size());

        const auto glcm = texture::compute_glcm(r.disc, dirs);
        for (const auto& m : glcm.per_direction)
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) CHECK(m(i, j) == m(j, i));

        const auto glrlm = texture::compute_glrlm(r.disc, dirs);
        for (const auto& m : glrlm.per_direction) {
            std::int64_t mass = 0;
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) mass += (j + 1) * m(i, j);
            CHECK(mass == n);
        }
        const auto glszm = texture::compute_glszm(r.disc);
        std::int64_t zmass = 0;
        for (int i = 0; i < glszm.counts.rows; ++i)
            for (int s = 0; s < glszm.counts.cols; ++s) zmass += (s + 1) * glszm.counts(i, s);
        CHECK(zmass == n);
        CHECK(texture::compute_gldm(r.disc).counts.total() == n);

        const auto ngtdm = texture::compute_ngtdm(r.disc);
        if (ngtdm.valid_voxels > 0) {
            double psum = 0;
            for (double p : ngtdm.p()) psum += p;
            CHECK(std::abs(psum - 1.0) < 1e-12);
        }
        for (double s : ngtdm.s) CHECK(s >= 0.0);

        // Translation leaves every matrix unchanged.
        std::vector<Index3> moved = r.disc.voxels();
        for (auto& v : moved) v = {v.x + 3, v.y - 2, v.z + 7};
        const prep::DiscretizedRoi shifted(moved, r.disc.levels());
        CHECK(texture::compute_glcm(shifted, dirs).per_direction == glcm.per_direction);
        CHECK(texture::compute_glrlm(shifted, dirs).per_direction == glrlm.per_direction);
        CHECK(texture::compute_glszm(shifted).counts == glszm.counts);
        CHECK(texture::compute_gldm(shifted).counts == texture::compute_gldm(r.disc).counts);
        CHECK(texture::compute_ngtdm(shifted).n == ngtdm.n);

        // A monotone relabelling permutes rows and columns.
        const int ng = r.disc.gray_levels();
        std::vector<int> relabel = r.disc.levels();
        for (auto& l : relabel) l = ng + 1 - l;  // reverse order
        const prep::DiscretizedRoi flipped(r.disc.voxels(), relabel);
        if (flipped.gray_levels() == ng) {
            const auto fg = texture::compute_glcm(flipped, dirs);
            for (std::size_t d = 0; d < dirs.size(); ++d)
                for (int i = 0; i < ng; ++i)
                    for (int j = 0; j < ng; ++j) CHECK(fg.per_direction[d](ng - 1 - i, ng - 1 - j) == glcm.per_direction[d](i, j));
        }
    }
}

TEST_CASE("empty ROI is rejected at construction") {
    CHECK(testing::code_of([] { prep::DiscretizedRoi({}, {}); }) == ErrorCode::EmptyRoi);
}
