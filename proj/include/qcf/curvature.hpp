#pragma once

#include <array>
#include <vector>

#include "qcf/chart_metric.hpp"
#include "qcf/tensor.hpp"

namespace qcf {

// All curvature quantities and the covariant derivatives needed by the
// criticality system, at one grid point. Index convention: all indices
// lowered, derivative indices appended last, e.g. gradE.at(i,j,k) = E_{ij,k}.
struct CurvatureFrame {
    std::array<double, kMaxDim> x{};
    int dim = 0;

    MetricAtPoint g;
    LabeledTensor Riemann;  // riemann-type
    LabeledTensor Ric;      // symmetric
    LabeledTensor E;        // traceless Ricci
    LabeledTensor W;        // weyl-type
    LabeledTensor C;        // cotton-type, C_{ijk}
    double R = 0.0;
    double normRm2 = 0.0, normE2 = 0.0, normW2 = 0.0, normC2 = 0.0;

    LabeledTensor gradR;      // R_{,i}
    LabeledTensor hessR;      // R_{,ij}
    LabeledTensor hessR_tf;   // R_{,ij} - (lapR/n) g_{ij}
    double lapR = 0.0;
    LabeledTensor gradE;      // E_{ij,k}
    LabeledTensor covd2E;     // E_{ij,kl} = nabla_l nabla_k E_ij
    LabeledTensor lapE;       // Delta E_{ij}
    LabeledTensor divW;       // W_{ijkl,l}
    LabeledTensor divC;       // C_{kij,k}
    LabeledTensor gradRic;    // R_{ij,k}

    double lap_normE2 = 0.0;     // Delta |E|^2
    double norm_gradE2 = 0.0;    // |nabla E|^2
    double grad_absE2 = 0.0;     // |nabla |E||^2 (0 where |E| ~ 0)
    double codazzi_resid = 0.0;  // max |E_{kj,i} - E_{ki,j}|
};

struct FrameOptions {
    bool derivatives = true;
    // FD step = min node gap * h_factor. Curvature point values come from
    // extended-precision assembly, so FD roundoff is negligible and a small
    // step keeps the h^4 truncation of derivative fields far below the
    // identity tolerances.
    double h_factor = 0.05;
};

CurvatureFrame frame_at(const ChartMetric& m, const double* x, const FrameOptions& opt = {});

enum class Exec { serial, parallel };

// Frames at every node of the dependent sub-grid, in grid order.
std::vector<CurvatureFrame> frame_field(const ChartMetric& m, Exec exec,
                                        const FrameOptions& opt = {});

// Max-norm of Riemann minus its reassembly from (W, E, R, g).
double check_weyl_reconstruction(const CurvatureFrame& f);

// Max-norm of W_{ijkl,l} + ((n-3)/(n-2)) C_{ijk}; throws for n = 3.
double check_divweyl_cotton(const CurvatureFrame& f);

// Residual of the commutation identity for E_{kj,ik}.
double check_commutation(const CurvatureFrame& f);

// Cotton tensor from the traceless-Ricci form, for cross-checking the
// Ricci-form value stored in the frame.
LabeledTensor cotton_from_E(const CurvatureFrame& f);

// |E_{kj,k} - ((n-2)/(2n)) R_{,j}| max over components (contracted Bianchi).
double check_contracted_bianchi(const CurvatureFrame& f);

}  // namespace qcf
