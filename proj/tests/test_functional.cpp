#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "qcf/functional.hpp"

using namespace qcf;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("functional integrals match closed forms on S^3") {
    CatalogParams cp;
    cp.n = 3;
    const ChartMetric m = build_metric("round_sphere", cp);
    QuadParams p{3, 0.25, -0.5};
    const auto fv = evaluate_functional(m, p);
    const double vol = 2.0 * pi * pi;
    CHECK(fv.volume == doctest::Approx(vol).epsilon(1e-10));
    CHECK(fv.int_ric2 == doctest::Approx(12.0 * vol).epsilon(1e-10));
    CHECK(fv.int_r2 == doctest::Approx(36.0 * vol).epsilon(1e-10));
    CHECK(fv.int_rm2 == doctest::Approx(12.0 * vol).epsilon(1e-10));
    CHECK(fv.F ==
          doctest::Approx((12.0 + 0.25 * 36.0 - 0.5 * 12.0) * vol).epsilon(1e-10));
}

TEST_CASE("the product has F = 0 exactly at the critical coefficients") {
    CatalogParams cp;
    cp.n = 3;
    const ChartMetric m = build_metric("product_circle_sphere", cp);
    QuadParams p{3, -0.5, 0.0};
    const auto fv = evaluate_functional(m, p);
    // |Ric|^2 = 2 and R^2 = 4 pointwise, so the density cancels.
    CHECK(std::abs(fv.F) < 1e-10 * fv.volume);
}

TEST_CASE("scaling law F(c^2 g) = c^{n-4} F(g)") {
    for (int n : {3, 4, 5}) {
        CatalogParams cp;
        cp.n = n;
        if (n == 5) cp.res_polar = 8;
        const ChartMetric m = build_metric("round_sphere", cp);
        QuadParams p{n, 0.3, 0.2};
        for (double c : {0.5, 2.0}) CHECK(scaling_check(m, p, c) < 1e-8);
    }
}

TEST_CASE("el_residuals requires unit volume") {
    CatalogParams cp;
    cp.n = 3;
    const ChartMetric m = build_metric("round_sphere", cp);
    QuadParams p{3, 0.0, 0.0};
    CHECK_THROWS_AS(el_residuals(m, p), std::invalid_argument);
}

TEST_CASE("criticality of round spheres at arbitrary coefficients") {
    CatalogParams cp;
    cp.n = 3;
    const ChartMetric m = build_metric("round_sphere", cp);
    const Rescaled u = rescale_to_unit_volume(m);
    for (auto [t, s] : {std::pair{0.0, 0.0}, std::pair{1.3, -0.7}, std::pair{-2.0, 0.4}}) {
        QuadParams p{3, t, s};
        const auto rep = el_residuals(u.metric, p);
        CHECK(rep.residual_traceless_rel < 1e-8);
        CHECK(rep.residual_scalar_rel < 1e-8);
        CHECK(rep.bochner1 < 1e-6);
        CHECK(rep.bochner2 < 1e-6);
        CHECK(rep.form_disagreement < 1e-10);
    }
}

TEST_CASE("product criticality switches with the coefficient line") {
    CatalogParams cp;
    cp.n = 3;
    const ChartMetric m = build_metric("product_circle_sphere", cp);
    const Rescaled u = rescale_to_unit_volume(m);

    QuadParams crit{3, -0.5, 0.0};
    const auto ok = el_residuals(u.metric, crit);
    CHECK(ok.residual_traceless_rel < 1e-8);
    CHECK(ok.residual_scalar_rel < 1e-8);
    CHECK(ok.defect_trace < 1e-6);

    QuadParams off{3, 0.0, 0.0};
    const auto bad = el_residuals(u.metric, off);
    CHECK(bad.residual_traceless_rel > 1e-2);
}

TEST_CASE("criticality locus of the product") {
    // L(t,s) = (n-2) + 2s + (n-1)(n-2) t vanishes exactly at the critical
    // coefficient pairs used above.
    const CriticalityLocus l3 = product_criticality_locus(3);
    CHECK(l3.eval(-0.5, 0.0) == doctest::Approx(0.0));
    CHECK(l3.eval(0.0, 0.0) != 0.0);
    const CriticalityLocus l5 = product_criticality_locus(5);
    CHECK(l5.eval(-0.25, 0.0) == doctest::Approx(0.0));
    CHECK(l5.sign_condition(0.0));
    CHECK_FALSE(l5.sign_condition(-2.0));
}

TEST_CASE("theorem integrands: degenerate and positive cases") {
    CatalogParams cp;
    cp.n = 3;
    const ChartMetric sphere = build_metric("round_sphere", cp);
    QuadParams p{3, 0.0, 0.0};
    // E = 0 on the sphere: the |E|-weighted integrand vanishes.
    const auto r = theorem_integrands(sphere, p, IntegrandKind::thm2);
    CHECK(std::abs(r.integral) < 1e-10);

    // lem31 needs R > 0 everywhere; the flat torus violates that.
    const ChartMetric torus = build_metric("flat_torus", cp);
    CHECK_THROWS_AS(theorem_integrands(torus, p, IntegrandKind::lem31),
                    std::invalid_argument);

    // On the sphere the lem31 left integral reduces to its |grad E|^2 = 0 form.
    const auto l = theorem_integrands(sphere, p, IntegrandKind::lem31);
    CHECK(std::abs(l.integral) < 1e-8);
    CHECK(std::abs(l.integral_rhs) < 1e-8);
}

TEST_CASE("unit-volume lambda equals the functional value") {
    CatalogParams cp;
    cp.n = 3;
    const ChartMetric m = build_metric("round_sphere", cp);
    const Rescaled u = rescale_to_unit_volume(m);
    QuadParams p{3, 0.1, 0.2};
    const auto rep = el_residuals(u.metric, p);
    const auto fv = evaluate_functional(u.metric, p);
    CHECK(rep.lambda == doctest::Approx(fv.F).epsilon(1e-12));
    CHECK(rep.volume == doctest::Approx(1.0).epsilon(1e-9));
}
