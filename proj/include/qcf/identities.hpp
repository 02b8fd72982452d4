#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcf/curvature.hpp"
#include "qcf/tensor.hpp"

namespace qcf {

struct IdentityVerdict {
    std::string id;
    double max_residual = 0.0;
    long sample_count = 0;
    std::uint64_t worst_seed = 0;
    double tolerance = 0.0;
    bool pass = true;

    void record(double resid, std::uint64_t seed) {
        ++sample_count;
        if (resid > max_residual) {
            max_residual = resid;
            worst_seed = seed;
        }
        pass = max_residual < tolerance;
    }
};

// Residuals of the three decomposition identities (traceless-Ricci/Weyl
// contraction, Riemann-square contraction, |Rm|^2 split) on a frame
// assembled from (W, E, R, g). Relative residuals.
struct DecompositionResiduals {
    double contraction;   // E_kl R_ikjl vs Weyl form
    double ricci_square;  // R_ikpq R_jkpq vs decomposition
    double norm_split;    // |Rm|^2 vs |W|^2 + 4/(n-2)|E|^2 + 2/(n(n-1))R^2
};
DecompositionResiduals check_decomposition_identities(const LabeledTensor& W,
                                                      const LabeledTensor& E, double R,
                                                      const MetricAtPoint& g);

// Slacks of the sharp trace bound: (trE^3 - lower, upper - trE^3), both >= 0
// up to rounding.
struct OkumuraSlack {
    double lower, upper;
};
OkumuraSlack check_okumura(const LabeledTensor& E, const MetricAtPoint& g);

// RHS - LHS of |W(E,E)| <= sqrt((n-2)/(2(n-1))) |W| |E|^2.
double check_huisken(const LabeledTensor& W, const LabeledTensor& E, const MetricAtPoint& g);

// Kato / Codazzi-refined Kato verdict over a frame field.
struct KatoVerdict {
    long tested = 0, skipped = 0;
    double min_plain_slack = 0.0;     // |grad E|^2 - |grad |E||^2, all nodes with |E| > 0
    double min_refined_slack = 0.0;   // |grad E|^2 - (n+2)/n |grad |E||^2, Codazzi nodes
    bool pass = true;
};
KatoVerdict check_kato_codazzi(const std::vector<CurvatureFrame>& frames,
                               double codazzi_gate = 1e-4, double slack_tol = 1e-6);

}  // namespace qcf
