#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "qcf/flow.hpp"

using namespace qcf;

TEST_CASE("family construction and validation") {
    CHECK(family_from_string("warped_circle_sphere") == FamilyId::warped_circle_sphere);
    CHECK_THROWS_AS(family_from_string("nope"), std::invalid_argument);
    CHECK_THROWS_AS(make_family(FamilyId::warped_circle_sphere, 2, 1), std::invalid_argument);
    const AnsatzFamily fam = make_family(FamilyId::warped_circle_sphere, 3, 2);
    CHECK(fam.dim() == 5);
    CHECK_THROWS_AS(fam.metric({0.0, 0.0}), std::invalid_argument);  // wrong length
}

TEST_CASE("theta = 0 reproduces the base metric") {
    const AnsatzFamily fam = make_family(FamilyId::warped_circle_sphere, 3, 1);
    const ChartMetric m = fam.metric({0.0, 0.0, 0.0});
    const double pi = std::numbers::pi;
    CHECK(m.volume() == doctest::Approx(8.0 * pi * pi).epsilon(1e-10));
}

TEST_CASE("objective value at the base point matches the closed form") {
    // Unit-volume F of S^1 x S^2 at (t,s) = (0,0): F(g) = 2 vol with
    // vol = 8 pi^2, rescaled by c^{n-4} = vol^{1/3}, giving 2 vol^{4/3}.
    const AnsatzFamily fam = make_family(FamilyId::warped_circle_sphere, 3, 1);
    QuadParams p{3, 0.0, 0.0};
    const ObjectiveValue o = objective(fam, {0.0, 0.0, 0.0}, p);
    const double want = 2.0 * std::pow(8.0 * std::numbers::pi * std::numbers::pi, 4.0 / 3.0);
    CHECK(o.F == doctest::Approx(want).epsilon(1e-10));
    CHECK_FALSE(o.barrier);
}

TEST_CASE("conformal torus base point is flat") {
    const AnsatzFamily fam = make_family(FamilyId::conformal_torus, 3, 2);
    QuadParams p{3, 0.4, -0.3};
    const ObjectiveValue o = objective(fam, {0.0, 0.0, 0.0, 0.0, 0.0}, p);
    CHECK(std::abs(o.F) < 1e-12);
    const auto g = gradient(fam, {0.0, 0.0, 0.0, 0.0, 0.0}, p);
    CHECK(grad_norm(g) < 1e-5);  // finite-difference gradient noise floor
}

TEST_CASE("objective invariant under the volume-only mode shift") {
    // Adding a constant to the conformal exponent only rescales the metric;
    // after unit-volume normalization the objective is unchanged.
    const AnsatzFamily fam = make_family(FamilyId::conformal_torus, 3, 1);
    QuadParams p{3, 0.1, 0.2};
    const ObjectiveValue a = objective(fam, {0.0, 0.15, 0.0}, p);
    const ObjectiveValue b = objective(fam, {0.37, 0.15, 0.0}, p);
    CHECK(a.F == doctest::Approx(b.F).epsilon(1e-8));
}

TEST_CASE("barrier detection") {
    const AnsatzFamily fam = make_family(FamilyId::warped_circle_sphere, 3, 1);
    QuadParams p{3, 0.0, 0.0};
    const ObjectiveValue o = objective(fam, {-2.0, 0.0, 0.0}, p);  // warp 1 - 2 < 0
    CHECK(o.barrier);
}

TEST_CASE("stationarity of the product at the critical coefficients") {
    const AnsatzFamily fam = make_family(FamilyId::warped_circle_sphere, 3, 2);
    QuadParams p{3, -0.5, 0.0};
    const auto g = gradient(fam, {0.0, 0.0, 0.0, 0.0, 0.0}, p);
    CHECK(grad_norm(g) < 1e-6);
    // Stationary start: the trace has a single accepted record.
    const FlowTrace tr = descend(fam, {0.0, 0.0, 0.0, 0.0, 0.0}, p);
    CHECK(tr.converged);
    CHECK(tr.steps.size() == 1);
}

TEST_CASE("non-critical coefficients leave a nonzero gradient") {
    const AnsatzFamily fam = make_family(FamilyId::warped_circle_sphere, 3, 2);
    QuadParams p{3, 0.0, 0.0};
    const ObjectiveValue o = objective(fam, {0.0, 0.0, 0.0, 0.0, 0.0}, p);
    const auto g = gradient(fam, {0.0, 0.0, 0.0, 0.0, 0.0}, p);
    CHECK(grad_norm(g) > 1e-3 * std::abs(o.F));
}

TEST_CASE("perturbed descent returns to a critical metric") {
    const AnsatzFamily fam = make_family(FamilyId::warped_circle_sphere, 3, 1);
    QuadParams p{3, -0.5, 0.0};
    const FlowTrace tr = descend(fam, {0.0, 0.1, 0.0}, p);
    CHECK(tr.converged);
    CHECK_FALSE(tr.incomplete);
    CHECK(tr.final_grad_norm < 1e-5);
    REQUIRE(tr.has_residuals);
    CHECK(tr.final_residuals.residual_traceless_rel < 1e-4);
    // The objective sequence is non-increasing.
    for (std::size_t k = 1; k < tr.steps.size(); ++k)
        CHECK(tr.steps[k].F <= tr.steps[k - 1].F + 1e-12);
}

TEST_CASE("descent is deterministic") {
    const AnsatzFamily fam = make_family(FamilyId::warped_circle_sphere, 3, 1);
    QuadParams p{3, -0.5, 0.0};
    const FlowTrace a = descend(fam, {0.0, 0.05, 0.0}, p);
    const FlowTrace b = descend(fam, {0.0, 0.05, 0.0}, p);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t k = 0; k < a.steps.size(); ++k) {
        CHECK(a.steps[k].F == b.steps[k].F);
        CHECK(a.steps[k].grad_norm == b.steps[k].grad_norm);
        for (std::size_t i = 0; i < a.steps[k].theta.size(); ++i)
            CHECK(a.steps[k].theta[i] == b.steps[k].theta[i]);
    }
}
