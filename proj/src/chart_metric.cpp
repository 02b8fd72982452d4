#include "qcf/chart_metric.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcf {

bool FourierSeries::cosine_only() const {
    for (double v : sinc)
        if (v != 0.0) return false;
    return true;
}

double FourierSeries::eval(double x) const {
    double v = a0;
    for (std::size_t k = 0; k < cosc.size(); ++k) v += cosc[k] * std::cos((k + 1.0) * x);
    for (std::size_t k = 0; k < sinc.size(); ++k) v += sinc[k] * std::sin((k + 1.0) * x);
    return v;
}

double FourierSeries::deriv(double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cosc.size(); ++k) v -= cosc[k] * (k + 1.0) * std::sin((k + 1.0) * x);
    for (std::size_t k = 0; k < sinc.size(); ++k) v += sinc[k] * (k + 1.0) * std::cos((k + 1.0) * x);
    return v;
}

double FourierSeries::deriv2(double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cosc.size(); ++k) {
        double w = (k + 1.0);
        v -= cosc[k] * w * w * std::cos(w * x);
    }
    for (std::size_t k = 0; k < sinc.size(); ++k) {
        double w = (k + 1.0);
        v -= sinc[k] * w * w * std::sin(w * x);
    }
    return v;
}

void gauss_legendre(int m, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    x.resize(m);
    w.resize(m);
    const double pi = std::numbers::pi;
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
        x[i] = xm - xl * z;
        x[m - 1 - i] = xm + xl * z;
        w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        w[m - 1 - i] = w[i];
    }
}

void ChartMetric::build_quadrature() {
    qnodes.assign(dim, {});
    qweights.assign(dim, {});
    for (int k = 0; k < dim; ++k) {
        const auto& c = coords[k];
        const int m = res[k];
        if (m < 2) throw std::invalid_argument("quadrature needs >= 2 nodes per coordinate");
        if (c.periodic) {
            const double h = (c.hi - c.lo) / m;
            qnodes[k].resize(m);
            qweights[k].assign(m, h);
            for (int i = 0; i < m; ++i) qnodes[k][i] = c.lo + i * h;
        } else {
            gauss_legendre(m, c.lo, c.hi, qnodes[k], qweights[k]);
        }
    }
}

MetricAtPoint ChartMetric::metric_at(const double* x) const {
    std::vector<double> g(static_cast<std::size_t>(dim) * dim);
    g_raw(x, g.data());
    for (double& v : g) v *= scale;
    return MetricAtPoint::from_components(dim, std::move(g));
}

void ChartMetric::d_metric(const double* x, double* dg) const {
    dg_raw(x, dg);
    const std::size_t sz = static_cast<std::size_t>(dim) * dim * dim;
    for (std::size_t i = 0; i < sz; ++i) dg[i] *= scale;
}

void ChartMetric::d2_metric(const double* x, double* d2g) const {
    d2g_raw(x, d2g);
    const std::size_t sz = static_cast<std::size_t>(dim) * dim * dim * dim;
    for (std::size_t i = 0; i < sz; ++i) d2g[i] *= scale;
}

double ChartMetric::sqrt_det_g(const double* x) const { return std::sqrt(metric_at(x).det()); }

ChartMetric ChartMetric::refined(int factor) const {
    ChartMetric m = *this;
    for (int& r : m.res) r *= factor;
    m.build_quadrature();
    return m;
}

std::vector<double> ChartMetric::fd_steps(double factor) const {
    std::vector<double> h(dim, 0.0);
    for (int k = 0; k < dim; ++k) {
        double gap = coords[k].hi - coords[k].lo;
        for (std::size_t i = 0; i + 1 < qnodes[k].size(); ++i)
            gap = std::min(gap, qnodes[k][i + 1] - qnodes[k][i]);
        h[k] = gap * factor;
    }
    return h;
}

double ChartMetric::volume() const {
    return integrate(*this, [](const double*) { return 1.0; });
}

Grid::Grid(const ChartMetric& cm) : m(&cm) {
    for (int k = 0; k < cm.dim; ++k) {
        if (cm.depends[k]) {
            dep.push_back(k);
        } else {
            double tot = 0.0;
            for (double w : cm.qweights[k]) tot += w;
            ind_weight *= tot;
        }
    }
}

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (int k : dep) s *= m->qnodes[k].size();
    return s;
}

void Grid::point(std::size_t idx, double* x) const {
    for (int k = 0; k < m->dim; ++k) x[k] = m->qnodes[k][0];
    for (int d = static_cast<int>(dep.size()) - 1; d >= 0; --d) {
        const int k = dep[d];
        const std::size_t mres = m->qnodes[k].size();
        x[k] = m->qnodes[k][idx % mres];
        idx /= mres;
    }
}

double Grid::weight(std::size_t idx) const {
    double w = ind_weight;
    for (int d = static_cast<int>(dep.size()) - 1; d >= 0; --d) {
        const int k = dep[d];
        const std::size_t mres = m->qnodes[k].size();
        w *= m->qweights[k][idx % mres];
        idx /= mres;
    }
    return w;
}

double integrate(const ChartMetric& m, const std::function<double(const double*)>& f) {
    Grid grid(m);
    const std::size_t nn = grid.size();
    double acc = 0.0;
    double x[kMaxDim];
    for (std::size_t k = 0; k < nn; ++k) {
        grid.point(k, x);
        acc += grid.weight(k) * m.sqrt_det_g(x) * f(x);
    }
    return acc;
}

Rescaled rescale_to_unit_volume(const ChartMetric& m) {
    const double vol = m.volume();
    if (!(vol > 0.0) || !std::isfinite(vol))
        throw std::runtime_error("cannot rescale: volume is zero or not finite");
    const double c = std::pow(vol, -1.0 / m.dim);
    Rescaled out{m, c};
    out.metric.scale *= c * c;
    return out;
}

}  // namespace qcf
