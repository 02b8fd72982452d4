#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "qcf/tensor.hpp"

using namespace qcf;

namespace {

// Naive contraction oracle: contracts the last index of a rank-2 a against
// the first index of a rank-2 b through g^{-1}.
LabeledTensor naive_matmul(const LabeledTensor& a, const LabeledTensor& b,
                           const MetricAtPoint& g) {
    const int n = a.dim();
    LabeledTensor out(n, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) s += a.at(i, p) * g.inv(p, q) * b.at(q, j);
            out.at(i, j) = s;
        }
    return out;
}

MetricAtPoint random_metric(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (auto& v : a) v = nd(rng);
    // g = A A^T + n I is symmetric positive definite.
    std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = (i == j) ? n : 0.0;
            for (int k = 0; k < n; ++k) s += a[i * n + k] * a[j * n + k];
            g[i * n + j] = s;
        }
    return MetricAtPoint::from_components(n, g);
}

}  // namespace

TEST_CASE("metric inverse and determinant") {
    for (int n = 2; n <= 6; ++n) {
        const MetricAtPoint g = random_metric(n, 100 + n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += g(i, k) * g.inv(k, j);
                CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
            }
        CHECK(g.det() > 0.0);
    }
    // Non-positive-definite input is rejected.
    CHECK_THROWS_AS(MetricAtPoint::from_components(2, {1.0, 2.0, 2.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("contract matches the naive loop oracle") {
    for (int n = 3; n <= 5; ++n) {
        const MetricAtPoint g = random_metric(n, 200 + n);
        const LabeledTensor a = random_symmetric(n, 1);
        const LabeledTensor b = random_symmetric(n, 2);
        const LabeledTensor got = contract(a, b, {{1, 0}}, g);
        const LabeledTensor want = naive_matmul(a, b, g);
        for (std::size_t k = 0; k < got.size(); ++k)
            CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
    }
}

TEST_CASE("full_contract and norm2 agree with explicit sums") {
    const int n = 4;
    const MetricAtPoint g = random_metric(n, 7);
    const LabeledTensor a = random_symmetric(n, 3);
    double want = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                    want += a.at(i, j) * g.inv(i, p) * g.inv(j, q) * a.at(p, q);
    CHECK(norm2(a, g) == doctest::Approx(want).epsilon(1e-12));
    CHECK(full_contract(a, a, g) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("tracefree_part removes the trace") {
    const int n = 5;
    const MetricAtPoint g = random_metric(n, 11);
    const LabeledTensor a = random_symmetric(n, 5);
    const LabeledTensor e = tracefree_part(a, g);
    CHECK(std::abs(trace(e, g)) < 1e-12 * a.max_abs());
    // Difference from a is proportional to g.
    const double lam = trace(a, g) / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            CHECK(a.at(i, j) - e.at(i, j) == doctest::Approx(lam * g(i, j)).epsilon(1e-10));
}

TEST_CASE("random generators respect their declared structure") {
    const MetricAtPoint id4 = MetricAtPoint::identity(4);
    for (int n = 3; n <= 6; ++n) {
        const MetricAtPoint id = MetricAtPoint::identity(n);
        const LabeledTensor E = random_tracefree_symmetric(n, 42);
        CHECK(E.symmetry_violation() < 1e-12);
        CHECK(std::abs(trace(E, id)) < 1e-12);

        const LabeledTensor Rm = random_riemann_like(n, 42);
        CHECK(Rm.symmetry_violation() < 1e-12 * std::max(1.0, Rm.max_abs()));

        const LabeledTensor W = random_weyl_like(n, 42);
        if (n == 3) {
            CHECK(W.max_abs() == 0.0);  // no Weyl tensor in dimension 3
        } else {
            CHECK(W.symmetry_violation(&id) < 1e-10 * std::max(1.0, W.max_abs()));
            // All single traces vanish.
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    double tr = 0.0;
                    for (int i = 0; i < n; ++i) tr += W.at(i, j, i, l);
                    CHECK(std::abs(tr) < 1e-10 * std::max(1.0, W.max_abs()));
                }
        }
    }
    (void)id4;
}

TEST_CASE("determinism of the random generators") {
    const LabeledTensor a = random_weyl_like(5, 987654321u);
    const LabeledTensor b = random_weyl_like(5, 987654321u);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
}

TEST_CASE("riemann_from_parts round-trips through contraction") {
    // Contracting the reassembled Riemann must reproduce Ric = E + (R/n) g.
    for (int n = 4; n <= 6; ++n) {
        const MetricAtPoint id = MetricAtPoint::identity(n);
        const LabeledTensor E = random_tracefree_symmetric(n, 9);
        const LabeledTensor W = random_weyl_like(n, 10);
        const double R = 2.7;
        const LabeledTensor Rm = riemann_from_parts(W, E, R, id);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double ric = 0.0;
                for (int j = 0; j < n; ++j) ric += Rm.at(i, j, k, j);
                const double want = E.at(i, k) + R / n * id(i, k);
                CHECK(ric == doctest::Approx(want).epsilon(1e-10));
            }
    }
}

TEST_CASE("checked construction rejects symmetry violations") {
    std::vector<double> comps(16, 0.0);
    comps[1] = 1.0;  // T_01 = 1 with T_10 = 0 is not symmetric
    CHECK_THROWS_AS(LabeledTensor::checked(4, 2, Sym::symmetric_pair, comps),
                    std::invalid_argument);
}
