#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "qcf/curvature.hpp"

using namespace qcf;

TEST_CASE("round spheres reproduce closed-form curvature") {
    // S^n(r): R = n(n-1)/r^2, |Rm|^2 = 2n(n-1)/r^4, E = W = C = 0.
    for (int n : {3, 4, 5}) {
        CatalogParams p;
        p.n = n;
        p.r = (n == 4) ? 2.0 : 1.0;
        if (n == 5) p.res_polar = 8;
        const ChartMetric m = build_metric("round_sphere", p);
        const auto frames = frame_field(m, Exec::serial, {});
        REQUIRE(!frames.empty());
        const double r2 = p.r * p.r;
        for (const auto& f : frames) {
            CHECK(f.R == doctest::Approx(n * (n - 1.0) / r2).epsilon(1e-12));
            CHECK(f.normRm2 == doctest::Approx(2.0 * n * (n - 1.0) / (r2 * r2)).epsilon(1e-12));
            CHECK(f.normE2 < 1e-12);
            CHECK(f.normW2 < 1e-12);
            // Cotton is third order in the metric: its FD error dominates and
            // grows with dimension and with the coarser n = 5 grid.
            CHECK(f.normC2 < ((n == 3) ? 1e-8 : 1e-3));
            CHECK(std::abs(f.lapR) < 1e-8);
            CHECK(f.lapE.max_abs() < 1e-8);
        }
    }
}

TEST_CASE("S^1 x S^2 product curvature") {
    CatalogParams p;
    p.n = 3;
    const ChartMetric m = build_metric("product_circle_sphere", p);
    const auto frames = frame_field(m, Exec::serial, {});
    for (const auto& f : frames) {
        CHECK(f.R == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(f.normE2 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(f.normRm2 == doctest::Approx(4.0).epsilon(1e-12));
        // Theorem equality relation R = sqrt(n(n-1)) |E| at n = 3.
        CHECK(std::abs(f.R - std::sqrt(6.0 * f.normE2)) < 1e-12);
        // Ricci eigenvalues (0, 1, 1) in the coordinate frame.
        const double ric00 = f.Ric.at(0, 0) / f.g(0, 0);
        const double ric11 = f.Ric.at(1, 1) / f.g(1, 1);
        CHECK(ric00 == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(ric11 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("S^2 x S^3 product of spheres") {
    CatalogParams p;
    p.n = 5;
    p.p = 2;
    p.q = 3;
    p.a = 1.0;
    p.b = 2.0;
    p.res_polar = 8;
    const ChartMetric m = build_metric("product_spheres", p);
    const auto frames = frame_field(m, Exec::serial, {});
    // R = R_{S^2(a)} + R_{S^3(b)} = 2/a^2 + 6/b^2.
    const double Rwant = 2.0 + 6.0 / 4.0;
    for (const auto& f : frames) CHECK(f.R == doctest::Approx(Rwant).epsilon(1e-12));
}

TEST_CASE("flat torus is flat") {
    CatalogParams p;
    p.n = 4;
    const ChartMetric m = build_metric("flat_torus", p);
    const auto frames = frame_field(m, Exec::serial, {});
    for (const auto& f : frames) {
        CHECK(f.normRm2 < 1e-28);
        CHECK(std::abs(f.R) < 1e-14);
    }
}

TEST_CASE("differential identities on a warped metric") {
    // Non-symmetric geometry: all derivative fields are genuinely nonzero.
    CatalogParams p;
    p.n = 4;
    p.warp.cosc = {0.15};
    const ChartMetric m = build_metric("warped_circle_sphere", p);
    const auto frames = frame_field(m, Exec::serial, {});
    REQUIRE(!frames.empty());
    double any_grad = 0.0;
    for (const auto& f : frames) {
        any_grad = std::max(any_grad, f.gradR.max_abs());
        // Weyl reconstruction of Riemann.
        CHECK(check_weyl_reconstruction(f) < 1e-10);
        // Contracted second Bianchi identity (FD-borne).
        CHECK(check_contracted_bianchi(f) < 1e-7);
        // div W = -((n-3)/(n-2)) C for n >= 4.
        CHECK(check_divweyl_cotton(f) < 1e-6);
        // Ricci commutation identity.
        CHECK(check_commutation(f) < 1e-6);
        // Cotton from the traceless-Ricci form matches the stored Ricci form.
        const LabeledTensor C2 = cotton_from_E(f);
        double dc = 0.0;
        for (std::size_t k = 0; k < C2.size(); ++k)
            dc = std::max(dc, std::abs(C2[k] - f.C[k]));
        CHECK(dc < 1e-8);
    }
    CHECK(any_grad > 1e-3);  // the check above must not be vacuous
}

TEST_CASE("divW-Cotton relation rejects n = 3") {
    CatalogParams p;
    p.n = 3;
    const ChartMetric m = build_metric("round_sphere", p);
    const double x[3] = {1.0, 1.0, 0.5};
    const CurvatureFrame f = frame_at(m, x);
    CHECK_THROWS_AS(check_divweyl_cotton(f), std::invalid_argument);
}

TEST_CASE("serial and parallel frame fields agree exactly") {
    CatalogParams p;
    p.n = 3;
    p.warp.cosc = {0.1};
    const ChartMetric m = build_metric("warped_circle_sphere", p);
    const auto a = frame_field(m, Exec::serial, {});
    const auto b = frame_field(m, Exec::parallel, {});
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].R == b[k].R);
        CHECK(a[k].normE2 == b[k].normE2);
        CHECK(a[k].lapR == b[k].lapR);
        for (std::size_t i = 0; i < a[k].lapE.size(); ++i)
            CHECK(a[k].lapE[i] == b[k].lapE[i]);
    }
}

TEST_CASE("conformal metrics: curvature responds to the factor") {
    CatalogParams p;
    p.n = 3;
    p.base = "flat_torus";
    p.conf.cosc = {0.1};
    const ChartMetric m = build_metric("conformal", p);
    const auto frames = frame_field(m, Exec::serial, {});
    double maxR = 0.0;
    for (const auto& f : frames) maxR = std::max(maxR, std::abs(f.R));
    CHECK(maxR > 1e-3);  // conformally non-flat factor bends the torus
    // W = 0 in dimension 3 regardless.
    for (const auto& f : frames) CHECK(f.normW2 < 1e-20);
}
