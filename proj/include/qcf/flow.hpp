#pragma once

#include <string>
#include <vector>

#include "qcf/functional.hpp"

namespace qcf {

enum class FamilyId { warped_circle_sphere, conformal_torus };

FamilyId family_from_string(const std::string& s);
std::string to_string(FamilyId id);

// Finite-dimensional metric family parametrized by Fourier coefficients
// theta = [a0, a1..aK, b1..bK]; theta = 0 is the base metric (product
// S^1 x S^{n-1}, resp. flat torus).
struct AnsatzFamily {
    FamilyId id;
    int n = 3;
    int modes = 4;  // K
    CatalogParams base;

    int dim() const { return 2 * modes + 1; }
    // Throws std::invalid_argument when warp/conformal positivity fails.
    ChartMetric metric(const std::vector<double>& theta) const;
};

AnsatzFamily make_family(FamilyId id, int n, int modes, const CatalogParams& base = {});

struct ObjectiveValue {
    double F = 0.0;       // unit-volume functional value
    double c = 1.0;       // rescaling factor applied
    bool barrier = false; // positivity violated; F not meaningful
};

ObjectiveValue objective(const AnsatzFamily& fam, const std::vector<double>& theta,
                         const QuadParams& p);

// Central finite differences, step 1e-4 * (1 + |theta_i|); throws
// std::domain_error if any stencil point hits the positivity barrier.
std::vector<double> gradient(const AnsatzFamily& fam, const std::vector<double>& theta,
                             const QuadParams& p);

double grad_norm(const std::vector<double>& g);

struct FlowStep {
    int iter = 0;
    std::vector<double> theta;
    double F = 0.0;
    double grad_norm = 0.0;
    double step_size = 0.0;  // learning rate actually used (0 for the initial record)
};

struct FlowTrace {
    std::vector<FlowStep> steps;
    bool converged = false;
    bool incomplete = false;  // barrier trap or stalled line search
    double final_grad_norm = 0.0;
    bool has_residuals = false;
    ResidualReport final_residuals;
};

struct FlowOptions {
    int max_steps = 2000;
    double lr = 1e-2;
    double tol = 1e-5;
    // Cap on the parameter displacement per step. The objective is unbounded
    // below outside the basin of the base metric, so uncapped steps can jump
    // the ridge even with monotone backtracking.
    double max_move = 0.05;
};

FlowTrace descend(const AnsatzFamily& fam, std::vector<double> theta0, const QuadParams& p,
                  const FlowOptions& opt = {});

}  // namespace qcf
