#include "qcf/flow.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcf {

FamilyId family_from_string(const std::string& s) {
    if (s == "warped_circle_sphere") return FamilyId::warped_circle_sphere;
    if (s == "conformal_torus") return FamilyId::conformal_torus;
    throw std::invalid_argument("unknown ansatz family: " + s);
}

std::string to_string(FamilyId id) {
    return id == FamilyId::warped_circle_sphere ? "warped_circle_sphere" : "conformal_torus";
}

AnsatzFamily make_family(FamilyId id, int n, int modes, const CatalogParams& base) {
    if (n < 3) throw std::invalid_argument("ansatz families need n >= 3");
    if (modes < 0) throw std::invalid_argument("modes must be nonnegative");
    AnsatzFamily fam;
    fam.id = id;
    fam.n = n;
    fam.modes = modes;
    fam.base = base;
    fam.base.n = n;
    return fam;
}

namespace {

FourierSeries series_from_theta(const std::vector<double>& theta, int K) {
    if (static_cast<int>(theta.size()) != 2 * K + 1)
        throw std::invalid_argument("theta has wrong length for the mode count");
    FourierSeries f;
    f.a0 = theta[0];
    f.cosc.assign(theta.begin() + 1, theta.begin() + 1 + K);
    f.sinc.assign(theta.begin() + 1 + K, theta.end());
    return f;
}

}  // namespace

ChartMetric AnsatzFamily::metric(const std::vector<double>& theta) const {
    CatalogParams p = base;
    p.n = n;
    const FourierSeries f = series_from_theta(theta, modes);
    if (id == FamilyId::warped_circle_sphere) {
        p.warp = f;
        return build_metric("warped_circle_sphere", p);
    }
    p.conf = f;
    p.base = "flat_torus";
    return build_metric("conformal", p);
}

ObjectiveValue objective(const AnsatzFamily& fam, const std::vector<double>& theta,
                         const QuadParams& p) {
    ObjectiveValue out;
    ChartMetric m;
    try {
        m = fam.metric(theta);
    } catch (const std::invalid_argument&) {
        out.barrier = true;
        out.F = std::numeric_limits<double>::infinity();
        return out;
    }
    const FunctionalValue fv = evaluate_functional(m, p);
    out.c = std::pow(fv.volume, -1.0 / fam.n);
    out.F = std::pow(out.c, static_cast<double>(fam.n) - 4.0) * fv.F;
    return out;
}

std::vector<double> gradient(const AnsatzFamily& fam, const std::vector<double>& theta,
                             const QuadParams& p) {
    std::vector<double> g(theta.size(), 0.0);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double h = 1e-4 * (1.0 + std::abs(theta[i]));
        std::vector<double> tp = theta, tm = theta;
        tp[i] += h;
        tm[i] -= h;
        const ObjectiveValue fp = objective(fam, tp, p);
        const ObjectiveValue fm = objective(fam, tm, p);
        if (fp.barrier || fm.barrier)
            throw std::domain_error("gradient stencil crossed the positivity barrier");
        g[i] = (fp.F - fm.F) / (2.0 * h);
    }
    return g;
}

double grad_norm(const std::vector<double>& g) {
    double s = 0.0;
    for (double v : g) s += v * v;
    return std::sqrt(s);
}

FlowTrace descend(const AnsatzFamily& fam, std::vector<double> theta0, const QuadParams& p,
                  const FlowOptions& opt) {
    FlowTrace trace;
    std::vector<double> theta = std::move(theta0);
    if (static_cast<int>(theta.size()) != fam.dim())
        throw std::invalid_argument("theta0 has wrong length for the family");

    ObjectiveValue cur = objective(fam, theta, p);
    if (cur.barrier) {
        trace.incomplete = true;
        return trace;
    }

    for (int iter = 0; iter <= opt.max_steps; ++iter) {
        std::vector<double> g;
        try {
            g = gradient(fam, theta, p);
        } catch (const std::domain_error&) {
            trace.incomplete = true;
            break;
        }
        const double gn = grad_norm(g);
        FlowStep step;
        step.iter = iter;
        step.theta = theta;
        step.F = cur.F;
        step.grad_norm = gn;
        trace.steps.push_back(step);
        trace.final_grad_norm = gn;
        if (gn < opt.tol) {
            trace.converged = true;
            break;
        }
        if (iter == opt.max_steps) break;

        // Backtracking line search: halve until the objective does not increase.
        double lr = opt.lr;
        if (opt.max_move > 0.0 && lr * gn > opt.max_move) lr = opt.max_move / gn;
        bool accepted = false;
        while (lr > 1e-14) {
            std::vector<double> trial = theta;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= lr * g[i];
            const ObjectiveValue ft = objective(fam, trial, p);
            if (!ft.barrier && ft.F <= cur.F) {
                theta = std::move(trial);
                cur = ft;
                trace.steps.back().step_size = lr;
                accepted = true;
                break;
            }
            lr *= 0.5;
        }
        if (!accepted) {
            trace.incomplete = true;
            break;
        }
    }

    // Independent criticality verdict on the final metric.
    try {
        const ChartMetric m = fam.metric(theta);
        const Rescaled unit = rescale_to_unit_volume(m);
        trace.final_residuals = el_residuals(unit.metric, p);
        trace.has_residuals = true;
    } catch (const std::exception&) {
        trace.has_residuals = false;
    }
    return trace;
}

}  // namespace qcf
