#include "qcf/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace qcf {

RegionSystemId region_system_from_string(const std::string& s) {
    if (s == "thm13_n3") return RegionSystemId::thm13_n3;
    if (s == "thm13_n5plus") return RegionSystemId::thm13_n5plus;
    if (s == "lem31_n3") return RegionSystemId::lem31_n3;
    if (s == "lem31_n5plus") return RegionSystemId::lem31_n5plus;
    throw std::invalid_argument("unknown region system: " + s);
}

std::string to_string(RegionSystemId id) {
    switch (id) {
        case RegionSystemId::thm13_n3: return "thm13_n3";
        case RegionSystemId::thm13_n5plus: return "thm13_n5plus";
        case RegionSystemId::lem31_n3: return "lem31_n3";
        case RegionSystemId::lem31_n5plus: return "lem31_n5plus";
    }
    return "?";
}

RegionSystem make_region_system(RegionSystemId id, int n) {
    const bool n3 = (id == RegionSystemId::thm13_n3 || id == RegionSystemId::lem31_n3);
    if (n3) return {id, 3};
    if (n < 5) throw std::invalid_argument("n5plus region systems need n >= 5");
    return {id, n};
}

namespace {

// Records one condition value with its pass orientation normalized to "> 0"
// ("strict" false means ">= 0"). Returns false on the first failure.
struct Checker {
    RegionVerdict v;
    int idx = 0;
    bool ok = true;

    void cond(double value, bool strict = true) {
        ++idx;
        v.values.push_back(value);
        if (!ok) return;
        const bool pass = std::isfinite(value) && (strict ? value > 0.0 : value >= 0.0);
        if (!pass) {
            ok = false;
            v.first_fail = idx;
        }
    }
};

}  // namespace

RegionVerdict feasible(const RegionSystem& sys, double t, double s) {
    Checker c;
    c.v.s_margin_flag = (1.0 + 4.0 * s <= 0.0);
    const double n = sys.n;
    switch (sys.id) {
        case RegionSystemId::thm13_n3: {
            c.cond(1.0 + 2.0 * t + 2.0 * s);
            c.cond(1.0 + 4.0 * s);
            c.cond(3.0 + 8.0 * t + 4.0 * s);
            c.cond(-(1.0 + 6.0 * t - 2.0 * s));
            if (c.ok) {
                const double lhs = 24.0 * (1.0 + 4.0 * s) * (1.0 + 4.0 * s) /
                                   ((1.0 + 6.0 * t - 2.0 * s) * (1.0 + 6.0 * t - 2.0 * s));
                const double rhs = (5.0 + 16.0 * t + 4.0 * s) * (5.0 + 16.0 * t + 4.0 * s) /
                                   (2.0 * (3.0 + 8.0 * t + 4.0 * s) * (1.0 + 2.0 * t + 2.0 * s));
                c.cond(lhs - rhs);
            } else {
                c.v.values.push_back(std::nan(""));
            }
            break;
        }
        case RegionSystemId::thm13_n5plus: {
            const double denom = n + 4.0 * (n - 1.0) * t + 4.0 * s;
            const double d4 = 4.0 - 2.0 * n - 2.0 * n * (n - 1.0) * t + 4.0 * (n - 2.0) * s;
            c.cond(1.0 + 2.0 * t + 2.0 * s);
            c.cond(n - 2.0 + 4.0 * s);
            c.cond(-denom);
            c.cond(d4);
            if (c.ok) {
                const double A = 0.5 * (1.0 + 4.0 * s) +
                                 (n - 1.0) * (n - 4.0) * (n - 2.0 + 4.0 * s) *
                                     (1.0 + 2.0 * t + 2.0 * s) / (n * (n - 2.0) * denom);
                const double lhs = -A * A * 2.0 * n * n * denom /
                                   ((n - 2.0) * (n - 4.0) * (1.0 + 4.0 * s) *
                                    (1.0 + 2.0 * t + 2.0 * s) * (n - 2.0 + 4.0 * s));
                const double num = 4.0 * s * (n * n - 3.0 * n + 4.0) + 4.0 * (n - 2.0);
                const double rhs = n * (n - 1.0) * num * num / ((n - 2.0) * (n - 2.0) * d4 * d4);
                c.cond(rhs - lhs, /*strict=*/false);
            } else {
                c.v.values.push_back(std::nan(""));
            }
            break;
        }
        case RegionSystemId::lem31_n3: {
            c.cond(1.0 + 2.0 * t + 2.0 * s);
            c.cond((1.0 + 4.0 * s) * (3.0 + 8.0 * t + 4.0 * s));
            break;
        }
        case RegionSystemId::lem31_n5plus: {
            c.cond(1.0 + 2.0 * t + 2.0 * s);
            c.cond(-(n - 2.0 + 4.0 * s) * (n + 4.0 * (n - 1.0) * t + 4.0 * s));
            break;
        }
    }
    c.v.feasible = c.ok;
    return c.v;
}

namespace {

std::vector<double> axis_nodes(double lo, double hi, int res) {
    std::vector<double> out;
    if (res <= 0) return out;
    if (res == 1) {
        out.push_back(lo);
        return out;
    }
    out.reserve(res);
    for (int i = 0; i < res; ++i) out.push_back(lo + (hi - lo) * i / (res - 1));
    return out;
}

}  // namespace

RegionReport scan(const RegionSystem& sys, double t_lo, double t_hi, double s_lo, double s_hi,
                  int res_t, int res_s) {
    if (!std::isfinite(t_lo) || !std::isfinite(t_hi) || !std::isfinite(s_lo) ||
        !std::isfinite(s_hi))
        throw std::invalid_argument("scan ranges must be finite");
    RegionReport rep;
    rep.t_nodes = axis_nodes(t_lo, t_hi, res_t);
    rep.s_nodes = axis_nodes(s_lo, s_hi, res_s);
    rep.res_t = static_cast<int>(rep.t_nodes.size());
    rep.res_s = static_cast<int>(rep.s_nodes.size());
    rep.verdicts.resize(static_cast<std::size_t>(rep.res_t) * rep.res_s);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < rep.res_t; ++i)
        for (int j = 0; j < rep.res_s; ++j)
            rep.verdicts[static_cast<std::size_t>(i) * rep.res_s + j] =
                feasible(sys, rep.t_nodes[i], rep.s_nodes[j]);

    std::string csv = "t,s,feasible,first_fail\n";
    char buf[128];
    for (int i = 0; i < rep.res_t; ++i)
        for (int j = 0; j < rep.res_s; ++j) {
            const auto& v = rep.verdicts[static_cast<std::size_t>(i) * rep.res_s + j];
            if (v.feasible) ++rep.feasible_count;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d\n", rep.t_nodes[i], rep.s_nodes[j],
                          v.feasible ? 1 : 0, v.first_fail);
            csv += buf;
        }
    rep.csv = std::move(csv);
    return rep;
}

PinchResult pinch_check(const ChartMetric& m, const QuadParams& p) {
    const int n = m.dim;
    if (n == 4) throw std::invalid_argument("pinch_check is defined for n = 3 and n >= 5 only");
    const double t = p.t, s = p.s;

    double num;  // coefficient of |E|^2 on the left, cross-multiplied
    double den2; // squared denominator multiplying R^2 on the right
    if (n == 3) {
        num = 24.0 * (1.0 + 4.0 * s) * (1.0 + 4.0 * s);
        const double d = 1.0 + 6.0 * t - 2.0 * s;
        den2 = d * d;
    } else {
        const double a = 4.0 * s * (n * n - 3.0 * n + 4.0) + 4.0 * (n - 2.0);
        num = n * (n - 1.0) * a * a;
        const double d = (n - 2.0) * (4.0 - 2.0 * n - 2.0 * n * (n - 1.0) * t +
                                      4.0 * (n - 2.0) * s);
        den2 = d * d;
    }

    FrameOptions opt;
    opt.derivatives = false;
    const auto frames = frame_field(m, Exec::parallel, opt);

    PinchResult out;
    out.margin = std::numeric_limits<double>::infinity();
    bool all_degenerate = true;
    for (long k = 0; k < static_cast<long>(frames.size()); ++k) {
        const auto& f = frames[k];
        const double lhs = num * f.normE2;
        const double rhs = den2 * f.R * f.R;
        if (f.R != 0.0 || f.normE2 > 1e-14) all_degenerate = false;
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        const double margin = (rhs - lhs) / scale;
        if (margin < out.margin) {
            out.margin = margin;
            out.worst_node = k;
        }
    }
    if (frames.empty()) out.margin = 0.0;
    if (all_degenerate) {
        out.degenerate = true;
        out.margin = 0.0;
    }
    return out;
}

}  // namespace qcf
