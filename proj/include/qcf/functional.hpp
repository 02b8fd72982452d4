#pragma once

#include <string>
#include <vector>

#include "qcf/chart_metric.hpp"
#include "qcf/curvature.hpp"

namespace qcf {

struct QuadParams {
    int n = 3;
    double t = 0.0, s = 0.0;
    double lambda = 0.0;  // unit-volume functional value, set after evaluation
};

struct FunctionalValue {
    double int_ric2 = 0.0;  // integral of |Ric|^2
    double int_r2 = 0.0;    // integral of R^2
    double int_rm2 = 0.0;   // integral of |Rm|^2
    double F = 0.0;
    double volume = 0.0;
};

FunctionalValue evaluate_functional(const ChartMetric& m, const QuadParams& p);

// Relative defect of F(c^2 g) against c^{n-4} F(g).
double scaling_check(const ChartMetric& m, const QuadParams& p, double c);

struct ResidualReport {
    double residual_traceless = 0.0;   // sup defect of the traceless equation
    double residual_traceless_rel = 0.0;  // divided by the term scale
    double residual_scalar = 0.0;      // sup defect of the scalar equation
    double residual_scalar_rel = 0.0;
    double bochner1 = 0.0;             // Delta |E|^2 identity defect
    double bochner2 = 0.0;             // Cotton-divergence identity defect
    double form_disagreement = 0.0;    // rewritten vs raw form of the traceless eq.
    double defect_trace = 0.0;         // trace of the defect tensor (should vanish)
    double volume = 0.0;
    double lambda = 0.0;
};

// Euler-Lagrange residuals; the metric must already have unit volume
// (tolerance 1e-6), otherwise std::invalid_argument is thrown.
ResidualReport el_residuals(const ChartMetric& m, const QuadParams& p);

// The affine form L(t,s) = (n-2) + 2s + (n-1)(n-2) t whose zero set marks
// criticality of the product S^1 x S^{n-1}, plus the two theorem constraint
// displays it consolidates (valid when n-2+4s > 0).
struct CriticalityLocus {
    int n;
    double coef_t, coef_s, coef_const;
    double eval(double t, double s) const { return coef_const + coef_s * s + coef_t * t; }
    double thm1_constraint(double t, double s) const;
    double thm2_constraint(double t, double s) const;
    bool sign_condition(double s) const { return n - 2 + 4.0 * s > 0.0; }
};
CriticalityLocus product_criticality_locus(int n);

enum class IntegrandKind {
    thm1_pos,  // integrand of the n+4(n-1)t+4s > 0 inequality
    thm1_neg,  // its sign-flipped counterpart
    thm2,      // Codazzi-case integrand with fractional |E| powers
    lem31,     // two-sided gradient estimate; returns both integrals
};

struct IntegrandResult {
    std::vector<double> density;  // per dependent-grid node (lhs density for lem31)
    double integral = 0.0;
    double integral_rhs = 0.0;  // lem31 only
};

IntegrandResult theorem_integrands(const ChartMetric& m, const QuadParams& p, IntegrandKind kind);

}  // namespace qcf
