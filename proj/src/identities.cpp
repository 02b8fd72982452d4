#include "qcf/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcf {

DecompositionResiduals check_decomposition_identities(const LabeledTensor& W,
                                                      const LabeledTensor& E, double R,
                                                      const MetricAtPoint& g) {
    const int n = g.dim;
    if (n < 3) throw std::invalid_argument("decomposition identities need n >= 3");
    LabeledTensor Rm = riemann_from_parts(W, E, R, g);

    const double e2 = norm2(E, g);
    const double w2 = norm2(W, g);
    const double scale = std::max({1.0, std::abs(R) * std::abs(R), e2, w2});

    DecompositionResiduals out{};

    // E_kl R_ikjl = E_kl W_ikjl + (|E|^2 g_ij - 2 E_ik E_jk)/(n-2) - R E_ij /(n(n-1))
    {
        LabeledTensor RE = contract(Rm, E, {{1, 0}, {3, 1}}, g);
        LabeledTensor WE = contract(W, E, {{1, 0}, {3, 1}}, g);
        LabeledTensor EE = contract(E, E, {{1, 1}}, g);
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double rhs = WE.at(i, j) + (e2 * g(i, j) - 2.0 * EE.at(i, j)) / (n - 2) -
                             R * E.at(i, j) / (static_cast<double>(n) * (n - 1));
                worst = std::max(worst, std::abs(RE.at(i, j) - rhs));
            }
        out.contraction = worst / scale;
    }

    // R_ikpq R_jkpq decomposition
    {
        LabeledTensor RR = contract(Rm, Rm, {{1, 1}, {2, 2}, {3, 3}}, g);
        LabeledTensor WW = contract(W, W, {{1, 1}, {2, 2}, {3, 3}}, g);
        LabeledTensor WE = contract(W, E, {{1, 0}, {3, 1}}, g);
        LabeledTensor EE = contract(E, E, {{1, 1}}, g);
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double rhs = WW.at(i, j) + 4.0 / (n - 2) * WE.at(i, j) +
                             2.0 * (n - 4) / ((n - 2.0) * (n - 2.0)) * EE.at(i, j) +
                             2.0 / ((n - 2.0) * (n - 2.0)) * e2 * g(i, j) +
                             2.0 / (static_cast<double>(n) * n * (n - 1)) * R * R * g(i, j) +
                             4.0 / (static_cast<double>(n) * (n - 1)) * R * E.at(i, j);
                worst = std::max(worst, std::abs(RR.at(i, j) - rhs));
            }
        out.ricci_square = worst / scale;
    }

    // |Rm|^2 split
    {
        double rm2 = norm2(Rm, g);
        double rhs = w2 + 4.0 / (n - 2) * e2 + 2.0 / (static_cast<double>(n) * (n - 1)) * R * R;
        out.norm_split = std::abs(rm2 - rhs) / scale;
    }
    return out;
}

OkumuraSlack check_okumura(const LabeledTensor& E, const MetricAtPoint& g) {
    const int n = g.dim;
    LabeledTensor EE = contract(E, E, {{1, 1}}, g);
    const double e2 = norm2(E, g);
    const double tr3 = full_contract(EE, E, g);
    const double bound = (n - 2.0) / std::sqrt(static_cast<double>(n) * (n - 1)) *
                         std::pow(e2, 1.5);
    return {tr3 + bound, bound - tr3};
}

double check_huisken(const LabeledTensor& W, const LabeledTensor& E, const MetricAtPoint& g) {
    const int n = g.dim;
    LabeledTensor WE = contract(W, E, {{1, 0}, {3, 1}}, g);  // W_ikjl E_kl
    const double lhs = std::abs(full_contract(WE, E, g));
    const double rhs = std::sqrt((n - 2.0) / (2.0 * (n - 1.0))) * std::sqrt(norm2(W, g)) *
                       norm2(E, g);
    return rhs - lhs;
}

KatoVerdict check_kato_codazzi(const std::vector<CurvatureFrame>& frames, double codazzi_gate,
                               double slack_tol) {
    KatoVerdict v;
    v.min_plain_slack = std::numeric_limits<double>::infinity();
    v.min_refined_slack = std::numeric_limits<double>::infinity();
    bool any_plain = false, any_refined = false;
    for (const auto& f : frames) {
        const double absE = std::sqrt(std::max(0.0, f.normE2));
        if (absE <= 1e-8) {
            ++v.skipped;
            continue;
        }
        const double plain = f.norm_gradE2 - f.grad_absE2;
        v.min_plain_slack = std::min(v.min_plain_slack, plain);
        any_plain = true;
        if (f.codazzi_resid < codazzi_gate) {
            const double refined =
                f.norm_gradE2 - (f.dim + 2.0) / f.dim * f.grad_absE2;
            v.min_refined_slack = std::min(v.min_refined_slack, refined);
            any_refined = true;
            ++v.tested;
        } else {
            ++v.skipped;
        }
    }
    if (!any_plain) v.min_plain_slack = 0.0;
    if (!any_refined) v.min_refined_slack = 0.0;
    v.pass = v.min_plain_slack >= -slack_tol && v.min_refined_slack >= -slack_tol;
    return v;
}

}  // namespace qcf
