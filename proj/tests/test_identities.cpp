#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qcf/identities.hpp"

using namespace qcf;

TEST_CASE("decomposition identities hold on synthetic frames") {
    for (int n : {3, 4, 5, 6}) {
        const MetricAtPoint g = MetricAtPoint::identity(n);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const LabeledTensor E = random_tracefree_symmetric(n, seed);
            const LabeledTensor W = random_weyl_like(n, seed + 1000);
            const double R = 0.5 + static_cast<double>(seed % 5);
            const auto d = check_decomposition_identities(W, E, R, g);
            CHECK(d.contraction < 1e-10);
            CHECK(d.ricci_square < 1e-10);
            CHECK(d.norm_split < 1e-10);
        }
    }
}

TEST_CASE("okumura trace bound: slack nonnegative on random data") {
    for (int n : {3, 4, 5, 6}) {
        const MetricAtPoint g = MetricAtPoint::identity(n);
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const LabeledTensor E = random_tracefree_symmetric(n, 7000 + seed);
            const auto sl = check_okumura(E, g);
            CHECK(sl.lower >= -1e-12);
            CHECK(sl.upper >= -1e-12);
        }
    }
}

TEST_CASE("okumura equality at multiplicity n-1 eigenstructure") {
    for (int n : {3, 4, 5, 6}) {
        const MetricAtPoint g = MetricAtPoint::identity(n);
        for (double b : {0.7, -1.3}) {
            LabeledTensor E(n, 2, Sym::symmetric_pair);
            for (int i = 0; i < n - 1; ++i) E.at(i, i) = b;
            E.at(n - 1, n - 1) = -(n - 1.0) * b;
            const auto sl = check_okumura(E, g);
            const double tight = std::min(std::abs(sl.lower), std::abs(sl.upper));
            CHECK(tight < 1e-12 * std::pow(std::abs(b) * n, 3));
            CHECK(sl.lower >= -1e-12);
            CHECK(sl.upper >= -1e-12);
        }
    }
}

TEST_CASE("huisken bound: slack nonnegative, equality when W = 0") {
    for (int n : {4, 5, 6}) {
        const MetricAtPoint g = MetricAtPoint::identity(n);
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const LabeledTensor E = random_tracefree_symmetric(n, 9000 + seed);
            const LabeledTensor W = random_weyl_like(n, 9500 + seed);
            CHECK(check_huisken(W, E, g) >= -1e-12);
        }
    }
    // n = 3: Weyl vanishes identically, both sides are zero.
    const MetricAtPoint g3 = MetricAtPoint::identity(3);
    const LabeledTensor E3 = random_tracefree_symmetric(3, 77);
    const LabeledTensor W3 = random_weyl_like(3, 78);
    CHECK(std::abs(check_huisken(W3, E3, g3)) < 1e-12);
}

TEST_CASE("kato inequality on a warped metric field") {
    CatalogParams p;
    p.n = 3;
    p.warp.cosc = {0.2};
    const ChartMetric m = build_metric("warped_circle_sphere", p);
    const auto frames = frame_field(m, Exec::serial, {});
    const auto v = check_kato_codazzi(frames);
    CHECK(v.tested > 0);
    CHECK(v.pass);
    CHECK(v.min_plain_slack >= -1e-6);
}

TEST_CASE("identity verdict bookkeeping") {
    IdentityVerdict v{"probe"};
    v.tolerance = 1e-3;
    v.record(1e-5, 1);
    CHECK(v.pass);
    v.record(1e-2, 2);
    CHECK_FALSE(v.pass);
    CHECK(v.worst_seed == 2);
    CHECK(v.sample_count == 2);
}
