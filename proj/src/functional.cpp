#include "qcf/functional.hpp"

#include <cmath>
#include <stdexcept>

namespace qcf {

namespace {

std::vector<CurvatureFrame> frames_of(const ChartMetric& m, bool derivatives) {
    FrameOptions opt;
    opt.derivatives = derivatives;
    return frame_field(m, Exec::parallel, opt);
}

struct NodeWeights {
    std::vector<double> wdv;  // quadrature weight * volume element per node
};

NodeWeights node_weights(const ChartMetric& m) {
    Grid grid(m);
    NodeWeights nw;
    nw.wdv.resize(grid.size());
    double x[kMaxDim];
    for (std::size_t k = 0; k < nw.wdv.size(); ++k) {
        grid.point(k, x);
        nw.wdv[k] = grid.weight(k) * m.sqrt_det_g(x);
    }
    return nw;
}

double ric2(const CurvatureFrame& f) { return f.normE2 + f.R * f.R / f.dim; }

}  // namespace

FunctionalValue evaluate_functional(const ChartMetric& m, const QuadParams& p) {
    const auto frames = frames_of(m, false);
    const auto nw = node_weights(m);
    FunctionalValue v;
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const auto& f = frames[k];
        if (!std::isfinite(f.R) || !std::isfinite(f.normRm2))
            throw std::runtime_error("non-finite curvature while evaluating the functional");
        v.int_ric2 += nw.wdv[k] * ric2(f);
        v.int_r2 += nw.wdv[k] * f.R * f.R;
        v.int_rm2 += nw.wdv[k] * f.normRm2;
        v.volume += nw.wdv[k];
    }
    v.F = v.int_ric2 + p.t * v.int_r2 + p.s * v.int_rm2;
    return v;
}

double scaling_check(const ChartMetric& m, const QuadParams& p, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("scaling_check: c must be positive");
    const FunctionalValue base = evaluate_functional(m, p);
    ChartMetric scaled = m;
    scaled.scale *= c * c;
    const FunctionalValue sc = evaluate_functional(scaled, p);
    const double expected = std::pow(c, static_cast<double>(p.n) - 4.0) * base.F;
    return std::abs(sc.F - expected) / std::max(1.0, std::abs(base.F));
}

ResidualReport el_residuals(const ChartMetric& m, const QuadParams& p) {
    const int n = m.dim;
    const double t = p.t, s = p.s;
    const FunctionalValue fv = evaluate_functional(m, p);
    if (std::abs(fv.volume - 1.0) > 1e-6)
        throw std::invalid_argument("el_residuals: rescale the metric to unit volume first");

    ResidualReport rep;
    rep.volume = fv.volume;
    rep.lambda = fv.F;

    const double c_hess = 1.0 + 2.0 * t + 2.0 * s;
    const double c_we = (2.0 * (n - 2) + 4.0 * n * s) / (n - 2);
    const double c_ee = (4.0 * s * (n * n - 3 * n + 4) + 4.0 * (n - 2)) / ((n - 2.0) * (n - 2.0));
    const double c_re = (4.0 - 2.0 * n - 2.0 * n * (n - 1) * t + 4.0 * (n - 2) * s) /
                        (static_cast<double>(n) * (n - 1));
    const double c_scal = n + 4.0 * (n - 1) * t + 4.0 * s;

    const auto frames = frames_of(m, true);

    // Normalization: each residual is reported relative to the magnitude of
    // the terms entering its equation, floored by the curvature scale of the
    // metric so the ratio stays meaningful when every term vanishes (e.g.
    // Einstein metrics, where the whole equation is 0 = 0).
    double term_scale = 0.0, scal_scale = 0.0, b1_scale = 0.0, b2_scale = 0.0;
    double curv2 = 0.0;
    for (const auto& f : frames) {
        curv2 = std::max({curv2, f.R * f.R, f.normRm2, ric2(f)});
        LabeledTensor WE = contract(f.W, f.E, {{1, 0}, {3, 1}}, f.g);   // W_ikjl E_kl
        LabeledTensor WW = contract(f.W, f.W, {{1, 1}, {2, 2}, {3, 3}}, f.g);
        LabeledTensor EE = contract(f.E, f.E, {{1, 1}}, f.g);
        LabeledTensor RmE = contract(f.Riemann, f.E, {{1, 0}, {3, 1}}, f.g);
        LabeledTensor RmRm = contract(f.Riemann, f.Riemann, {{1, 1}, {2, 2}, {3, 3}}, f.g);

        LabeledTensor defect(n, 2), defect_raw(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double lhs = (1.0 + 4.0 * s) * f.lapE.at(i, j);
                double rhs = c_hess * f.hessR_tf.at(i, j);
                rhs -= c_we * WE.at(i, j);
                rhs -= 2.0 * s * WW.at(i, j);
                rhs += (-c_ee / n * f.normE2 + 2.0 * s / n * f.normW2) * f.g(i, j);
                rhs += c_ee * EE.at(i, j);
                rhs += c_re * f.R * f.E.at(i, j);
                defect.at(i, j) = lhs - rhs;

                double rhs0 = c_hess * f.hessR.at(i, j) - c_hess / n * f.lapR * f.g(i, j);
                rhs0 -= 2.0 * (1.0 + 2.0 * s) * RmE.at(i, j);
                rhs0 -= (2.0 + 2.0 * n * t - 4.0 * s) / n * f.R * f.E.at(i, j);
                rhs0 += 2.0 / n * (f.normE2 + s * f.normRm2) * f.g(i, j);
                rhs0 -= 2.0 * s * RmRm.at(i, j);
                rhs0 += 4.0 * s * EE.at(i, j);
                defect_raw.at(i, j) = lhs - rhs0;

                term_scale = std::max({term_scale, std::abs(lhs), std::abs(c_hess * f.hessR_tf.at(i, j)),
                                       std::abs(c_we * WE.at(i, j)), std::abs(c_ee * EE.at(i, j)),
                                       std::abs(c_re * f.R * f.E.at(i, j)),
                                       std::abs(c_ee / n * f.normE2 * f.g(i, j))});
            }
        rep.residual_traceless = std::max(rep.residual_traceless, defect.max_abs());
        rep.defect_trace = std::max(rep.defect_trace, std::abs(trace(defect, f.g)));
        for (std::size_t k = 0; k < defect.size(); ++k)
            rep.form_disagreement =
                std::max(rep.form_disagreement, std::abs(defect[k] - defect_raw[k]));

        const double dens = ric2(f) + t * f.R * f.R + s * f.normRm2;
        const double scal = c_scal * f.lapR - (n - 4.0) * (dens - fv.F);
        rep.residual_scalar = std::max(rep.residual_scalar, std::abs(scal));
        scal_scale = std::max({scal_scale, std::abs(c_scal * f.lapR), std::abs((n - 4.0) * dens),
                               std::abs((n - 4.0) * fv.F)});

        // Bochner identity for Delta |E|^2
        {
            const double lhs = 0.5 * (1.0 + 4.0 * s) * f.lap_normE2;
            double rhs = (1.0 + 4.0 * s) * f.norm_gradE2;
            rhs += c_hess * full_contract(f.hessR, f.E, f.g);
            rhs -= c_we * full_contract(WE, f.E, f.g);
            rhs -= 2.0 * s * full_contract(WW, f.E, f.g);
            rhs += c_ee * full_contract(EE, f.E, f.g);
            rhs += c_re * f.R * f.normE2;
            rep.bochner1 = std::max(rep.bochner1, std::abs(lhs - rhs));
            b1_scale = std::max({b1_scale, std::abs(lhs),
                                 std::abs((1.0 + 4.0 * s) * f.norm_gradE2),
                                 std::abs(c_hess * full_contract(f.hessR, f.E, f.g)),
                                 std::abs(c_ee * full_contract(EE, f.E, f.g)),
                                 std::abs(c_re * f.R * f.normE2)});
        }
        // Cotton-divergence identity
        {
            const double c_b2e = (4.0 - 3.0 * n - 8.0 * s - 2.0 * n * (n - 1) * t) /
                                 (static_cast<double>(n) * (n - 1));
            const double c_we2 = (n - 2.0 + 8.0 * s) / (n - 2.0);
            const double c_ee2 = (n - 4.0) * (n - 2.0 + 4.0 * s) / ((n - 2.0) * (n - 2.0));
            double worst = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double lhs = (1.0 + 4.0 * s) * f.divC.at(i, j);
                    double rhs = c_scal / (2.0 * (n - 1.0)) * f.hessR_tf.at(i, j);
                    rhs -= c_we2 * WE.at(i, j);
                    rhs -= 2.0 * s * (WW.at(i, j) - f.normW2 / n * f.g(i, j));
                    rhs -= c_ee2 * (EE.at(i, j) - f.normE2 / n * f.g(i, j));
                    rhs += c_b2e * f.R * f.E.at(i, j);
                    worst = std::max(worst, std::abs(lhs - rhs));
                    b2_scale = std::max(
                        {b2_scale, std::abs(lhs),
                         std::abs(c_scal / (2.0 * (n - 1.0)) * f.hessR_tf.at(i, j)),
                         std::abs(c_we2 * WE.at(i, j)), std::abs(c_ee2 * EE.at(i, j)),
                         std::abs(c_b2e * f.R * f.E.at(i, j))});
                }
            rep.bochner2 = std::max(rep.bochner2, worst);
        }
    }
    const double coeff_scal = std::abs(c_scal) +
                              std::abs(n - 4.0) * (1.0 + std::abs(t) + std::abs(s));
    rep.residual_traceless_rel =
        rep.residual_traceless / std::max({term_scale, curv2, 1e-12});
    rep.residual_scalar_rel =
        rep.residual_scalar /
        std::max({scal_scale, coeff_scal * curv2, std::abs((n - 4.0) * fv.F), 1e-12});
    const double curv3 = curv2 * std::sqrt(curv2);
    rep.bochner1 /= std::max({b1_scale, curv3, 1e-12});
    rep.bochner2 /= std::max({b2_scale, curv2, 1e-12});
    return rep;
}

double CriticalityLocus::thm1_constraint(double t, double s) const {
    return (n - 4.0) / (n - 2.0) * std::abs(n - 2.0 + 4.0 * s) + 4.0 - 3.0 * n - 8.0 * s -
           2.0 * n * (n - 1.0) * t;
}

double CriticalityLocus::thm2_constraint(double t, double s) const {
    return -std::abs(4.0 * s * (n * n - 3.0 * n + 4.0) + 4.0 * (n - 2.0)) +
           (n - 2.0) * (4.0 - 2.0 * n - 2.0 * n * (n - 1.0) * t + 4.0 * (n - 2.0) * s);
}

CriticalityLocus product_criticality_locus(int n) {
    if (n < 3) throw std::invalid_argument("locus needs n >= 3");
    CriticalityLocus l;
    l.n = n;
    l.coef_t = (n - 1.0) * (n - 2.0);
    l.coef_s = 2.0;
    l.coef_const = n - 2.0;
    return l;
}

IntegrandResult theorem_integrands(const ChartMetric& m, const QuadParams& p, IntegrandKind kind) {
    const int n = m.dim;
    const double t = p.t, s = p.s;
    const bool needs_deriv = (kind == IntegrandKind::thm1_pos || kind == IntegrandKind::thm1_neg ||
                              kind == IntegrandKind::lem31);
    const auto frames = frames_of(m, needs_deriv);
    const auto nw = node_weights(m);

    IntegrandResult out;
    out.density.resize(frames.size());

    const double sqnn1 = std::sqrt(static_cast<double>(n) * (n - 1));
    const double sq2n21 = std::sqrt(2.0 * (n - 2.0) * (n - 1.0));

    for (std::size_t k = 0; k < frames.size(); ++k) {
        const auto& f = frames[k];
        const double absE = std::sqrt(std::max(0.0, f.normE2));
        const double absW = std::sqrt(std::max(0.0, f.normW2));
        double d = 0.0, drhs = 0.0;
        switch (kind) {
            case IntegrandKind::thm1_pos:
            case IntegrandKind::thm1_neg: {
                const double sgn = (kind == IntegrandKind::thm1_pos) ? 1.0 : -1.0;
                d = 0.5 * (1.0 + 4.0 * s) * f.normC2;
                d += sgn * (n - 4.0) * std::abs(n - 2.0 + 4.0 * s) / ((n - 2.0) * sqnn1) * absE *
                     absE * absE;
                d += (4.0 - 3.0 * n - 8.0 * s - 2.0 * n * (n - 1.0) * t) /
                     (static_cast<double>(n) * (n - 1.0)) * f.R * f.normE2;
                d += sgn * std::abs(n - 2.0 + 8.0 * s) / sq2n21 * absW * f.normE2;
                d += sgn * 2.0 * std::abs(s) * f.normW2 * absE;
                break;
            }
            case IntegrandKind::thm2: {
                if (absE < 1e-12) {
                    d = 0.0;  // removable zero set
                    break;
                }
                const double eA = std::pow(absE, (n - 2.0) / n);
                const double eB = std::pow(absE, -2.0 / n);
                const double eC = std::pow(absE, 2.0 * (n - 1.0) / n);
                d = -std::abs(2.0 * (n - 2.0) + 4.0 * n * s) / sq2n21 * absW * eA;
                d -= 2.0 * std::abs(s) * f.normW2 * eB;
                d -= std::abs(4.0 * s * (n * n - 3.0 * n + 4.0) + 4.0 * (n - 2.0)) /
                     ((n - 2.0) * sqnn1) * eC;
                d += (4.0 - 2.0 * n - 2.0 * n * (n - 1.0) * t + 4.0 * (n - 2.0) * s) /
                     (static_cast<double>(n) * (n - 1.0)) * f.R * eA;
                break;
            }
            case IntegrandKind::lem31: {
                if (!(f.R > 0.0))
                    throw std::invalid_argument("lem31 integrand requires R > 0 at every node");
                const double denom = n + 4.0 * (n - 1.0) * t + 4.0 * s;
                const double A = 0.5 * (1.0 + 4.0 * s) +
                                 (n - 1.0) * (n - 4.0) * (n - 2.0 + 4.0 * s) *
                                     (1.0 + 2.0 * t + 2.0 * s) /
                                     (static_cast<double>(n) * (n - 2.0) * denom);
                const double B = 2.0 * n * n * denom /
                                 ((n - 2.0) * (n - 4.0) * (1.0 + 2.0 * t + 2.0 * s) *
                                  (n - 2.0 + 4.0 * s));
                d = ((1.0 + 4.0 * s) * f.R * f.R + A * A * B * f.normE2) * f.norm_gradE2 / f.R;
                drhs = (std::abs(4.0 * s * (n * n - 3.0 * n + 4.0) + 4.0 * (n - 2.0)) /
                            ((n - 2.0) * sqnn1) * absE -
                        (4.0 - 2.0 * n - 2.0 * n * (n - 1.0) * t + 4.0 * (n - 2.0) * s) /
                            (static_cast<double>(n) * (n - 1.0)) * f.R) *
                       f.R * f.normE2;
                break;
            }
        }
        out.density[k] = d;
        out.integral += nw.wdv[k] * d;
        out.integral_rhs += nw.wdv[k] * drhs;
    }
    return out;
}

}  // namespace qcf
