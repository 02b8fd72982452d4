// Compares the serial reference frame-field evaluation against the
// OpenMP-parallel one and reports timings plus the max discrepancy.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "qcf/curvature.hpp"

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

void bench(const char* id, const qcf::ChartMetric& m) {
    using clock = std::chrono::steady_clock;
    qcf::FrameOptions opt;

    const auto t0 = clock::now();
    const auto serial = qcf::frame_field(m, qcf::Exec::serial, opt);
    const auto t1 = clock::now();
    const auto parallel = qcf::frame_field(m, qcf::Exec::parallel, opt);
    const auto t2 = clock::now();

    double worst = 0.0;
    for (std::size_t k = 0; k < serial.size(); ++k) {
        worst = std::max(worst, std::abs(serial[k].R - parallel[k].R));
        worst = std::max(worst, std::abs(serial[k].normE2 - parallel[k].normE2));
        worst = std::max(worst, std::abs(serial[k].lapR - parallel[k].lapR));
    }
    std::printf("%-28s nodes=%6zu serial=%8.3fs parallel=%8.3fs speedup=%5.2fx max|diff|=%g\n",
                id, serial.size(), seconds(t0, t1), seconds(t1, t2),
                seconds(t0, t1) / std::max(1e-9, seconds(t1, t2)), worst);
}

}  // namespace

int main() {
    qcf::CatalogParams p;
    p.n = 3;
    bench("round_sphere(3,1)", qcf::build_metric("round_sphere", p));
    bench("product_circle_sphere(3)", qcf::build_metric("product_circle_sphere", p));
    p.n = 4;
    bench("round_sphere(4,1)", qcf::build_metric("round_sphere", p));
    p.n = 3;
    p.warp.cosc = {0.1};
    bench("warped_circle_sphere(3)", qcf::build_metric("warped_circle_sphere", p));
    return 0;
}
