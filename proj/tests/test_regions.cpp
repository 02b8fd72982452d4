#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "qcf/regions.hpp"

using namespace qcf;

namespace {

RegionVerdict point(RegionSystemId id, int n, double t, double s) {
    return feasible(make_region_system(id, n), t, s);
}

}  // namespace

TEST_CASE("region system parsing") {
    CHECK(region_system_from_string("thm13_n3") == RegionSystemId::thm13_n3);
    CHECK(region_system_from_string("lem31_n5plus") == RegionSystemId::lem31_n5plus);
    CHECK_THROWS_AS(region_system_from_string("bogus"), std::invalid_argument);
    CHECK(to_string(RegionSystemId::thm13_n5plus) == "thm13_n5plus");
    CHECK_THROWS_AS(make_region_system(RegionSystemId::thm13_n5plus, 4),
                    std::invalid_argument);
}

TEST_CASE("three-dimensional system: known feasible and infeasible points") {
    CHECK(point(RegionSystemId::thm13_n3, 3, 0.0, 0.68).feasible);
    CHECK(point(RegionSystemId::thm13_n3, 3, 0.0, 1.0).feasible);
    const auto origin = point(RegionSystemId::thm13_n3, 3, 0.0, 0.0);
    CHECK_FALSE(origin.feasible);
    CHECK(origin.first_fail == 4);
    // At t = 0 condition 4 reads 2s - 1 > 0, so s below 1/2 fails there.
    const auto below = point(RegionSystemId::thm13_n3, 3, 0.0, 0.4);
    CHECK_FALSE(below.feasible);
    CHECK(below.first_fail == 4);
}

TEST_CASE("five conditions recorded in order") {
    const auto v = point(RegionSystemId::thm13_n3, 3, 0.0, 1.0);
    REQUIRE(v.values.size() == 5);
    CHECK(v.values[0] == doctest::Approx(3.0));   // 1 + 2t + 2s
    CHECK(v.values[1] == doctest::Approx(5.0));   // 1 + 4s
    CHECK(v.values[2] == doctest::Approx(7.0));   // 3 + 8t + 4s
    CHECK(v.values[3] == doctest::Approx(1.0));   // -(1 + 6t - 2s)
    CHECK(v.first_fail == 0);
}

TEST_CASE("higher-dimensional system restricted to s = 0") {
    const RegionSystem sys = make_region_system(RegionSystemId::thm13_n5plus, 5);
    // A sample inside the reported feasible t-window.
    CHECK(feasible(sys, -0.35, 0.0).feasible);
    // Outside the bracket (-1/2, -5/16) nothing is feasible.
    CHECK_FALSE(feasible(sys, -0.55, 0.0).feasible);
    CHECK_FALSE(feasible(sys, -0.30, 0.0).feasible);
    CHECK_FALSE(feasible(sys, 0.0, 0.0).feasible);
    // The flagged boundary assumption 1 + 4s <= 0.
    CHECK(feasible(sys, -0.35, -0.3).s_margin_flag);
    CHECK_FALSE(feasible(sys, -0.35, 0.0).s_margin_flag);
}

TEST_CASE("gradient-estimate systems") {
    CHECK(point(RegionSystemId::lem31_n3, 3, 0.0, 1.0).feasible);
    CHECK_FALSE(point(RegionSystemId::lem31_n3, 3, -2.0, 0.0).feasible);
    // n = 5: needs (n-2+4s)(n+4(n-1)t+4s) < 0.
    CHECK(point(RegionSystemId::lem31_n5plus, 5, -0.4, 0.0).feasible);
    CHECK_FALSE(point(RegionSystemId::lem31_n5plus, 5, 0.0, 0.0).feasible);
}

TEST_CASE("scan grid layout and determinism") {
    const RegionSystem sys = make_region_system(RegionSystemId::thm13_n3, 3);
    const RegionReport a = scan(sys, -1.0, 1.0, -1.0, 1.0, 21, 21);
    const RegionReport b = scan(sys, -1.0, 1.0, -1.0, 1.0, 21, 21);
    CHECK(a.res_t == 21);
    CHECK(a.res_s == 21);
    CHECK(a.verdicts.size() == 441);
    CHECK(a.feasible_count > 0);
    CHECK(a.csv == b.csv);  // byte-identical CSV across reruns
    // Row-major t-outer layout.
    const auto& v = a.verdicts[static_cast<std::size_t>(10) * 21 + 17];
    const auto direct = feasible(sys, a.t_nodes[10], a.s_nodes[17]);
    CHECK(v.feasible == direct.feasible);
    CHECK(v.first_fail == direct.first_fail);
}

TEST_CASE("scan rejects non-finite ranges") {
    const RegionSystem sys = make_region_system(RegionSystemId::thm13_n3, 3);
    CHECK_THROWS_AS(scan(sys, 0.0, std::nan(""), 0.0, 1.0, 3, 3), std::invalid_argument);
}

TEST_CASE("pinch check on catalog metrics") {
    CatalogParams cp;
    cp.n = 3;
    const ChartMetric prod = build_metric("product_circle_sphere", cp);
    // At (t,s) = (0,1) the product violates the pinching strictly.
    QuadParams p{3, 0.0, 1.0};
    const auto bad = pinch_check(prod, p);
    CHECK(bad.margin < 0.0);
    CHECK_FALSE(bad.degenerate);

    // The round sphere has E = 0: pinching holds with full margin.
    const ChartMetric sph = build_metric("round_sphere", cp);
    const auto good = pinch_check(sph, p);
    CHECK(good.margin > 0.0);

    // Flat torus: R = 0 and E = 0 everywhere, flagged degenerate.
    const ChartMetric torus = build_metric("flat_torus", cp);
    const auto degen = pinch_check(torus, p);
    CHECK(degen.degenerate);
    CHECK(degen.margin == 0.0);

    // n = 4 has no pinching display.
    cp.n = 4;
    const ChartMetric s4 = build_metric("round_sphere", cp);
    CHECK_THROWS_AS(pinch_check(s4, p), std::invalid_argument);
}
