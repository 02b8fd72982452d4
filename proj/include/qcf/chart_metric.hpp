#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcf/tensor.hpp"

namespace qcf {

inline constexpr int kMaxDim = 8;

struct CoordSpec {
    double lo = 0.0, hi = 1.0;
    bool periodic = false;
};

// Finite Fourier series a0 + sum a_k cos(k x) + sum b_k sin(k x).
struct FourierSeries {
    double a0 = 0.0;
    std::vector<double> cosc, sinc;

    bool empty() const { return a0 == 0.0 && cosc.empty() && sinc.empty(); }
    bool cosine_only() const;
    double eval(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;
};

// Gauss-Legendre nodes/weights on (a, b).
void gauss_legendre(int m, double a, double b, std::vector<double>& x, std::vector<double>& w);

// One coordinate chart with analytic metric coefficients and their first and
// second partials, plus a tensor-product quadrature grid. A single uniform
// conformal scale factor (c^2) is carried separately so unit-volume rescaling
// is exact.
struct ChartMetric {
    int dim = 0;
    std::string label;
    std::vector<CoordSpec> coords;
    std::vector<int> res;                       // nodes per coordinate
    std::vector<std::vector<double>> qnodes;    // per coordinate
    std::vector<std::vector<double>> qweights;  // per coordinate
    std::vector<bool> depends;                  // metric depends on coordinate k
    double scale = 1.0;                         // multiplies every g_ij

    // raw (unscaled) coefficient functions; layouts are row-major:
    //   g:   n*n          g_ij
    //   dg:  n*n*n        d_k g_ij  -> dg[(k*n+i)*n+j]
    //   d2g: n*n*n*n      d_k d_l g_ij -> d2g[((k*n+l)*n+i)*n+j]
    std::function<void(const double*, double*)> g_raw, dg_raw, d2g_raw;

    // Same data in quadruple precision (g, dg, d2g at once). Curvature
    // assembly near chart poles cancels up to ~8 digits per polar pair, so
    // the basic curvature pass consumes this when available.
    std::function<void(const double*, __float128*, __float128*, __float128*)> eval_hp_raw;

    MetricAtPoint metric_at(const double* x) const;
    void d_metric(const double* x, double* dg) const;    // scaled
    void d2_metric(const double* x, double* d2g) const;  // scaled
    double sqrt_det_g(const double* x) const;

    double volume() const;
    // New chart with `factor` times as many nodes per coordinate.
    ChartMetric refined(int factor) const;
    // FD step per coordinate: min adjacent node gap times `factor`.
    std::vector<double> fd_steps(double factor = 0.05) const;

    void build_quadrature();
};

// Iteration over the sub-grid of coordinates the metric depends on;
// independent coordinates are pinned to their first node and contribute
// their total quadrature weight as a constant factor.
struct Grid {
    const ChartMetric* m = nullptr;
    std::vector<int> dep;
    double ind_weight = 1.0;

    explicit Grid(const ChartMetric& cm);
    std::size_t size() const;
    void point(std::size_t k, double* x) const;
    double weight(std::size_t k) const;  // includes ind_weight
};

// Quadrature of f over the chart with the metric volume element.
double integrate(const ChartMetric& m, const std::function<double(const double*)>& f);

struct CatalogParams {
    int n = 3;          // total dimension where applicable
    int p = 2, q = 3;   // product_spheres factor dimensions
    double L = 1.0;     // circle radius
    double r = 1.0;     // sphere radius
    double a = 1.0;     // first sphere radius (product_spheres)
    double b = 1.0;     // second sphere radius
    double side = 1.0;  // torus side
    FourierSeries warp;  // added to the constant warp r
    FourierSeries conf;  // conformal exponent u
    std::string base;    // base id for `conformal`
    int res_periodic = 24;
    int res_polar = 16;
};

// ids: flat_torus, round_sphere, product_circle_sphere, product_spheres,
//      warped_circle_sphere, conformal
ChartMetric build_metric(const std::string& id, const CatalogParams& params);

std::vector<std::string> catalog_ids();

struct Rescaled {
    ChartMetric metric;
    double c;  // g' = c^2 g
};
Rescaled rescale_to_unit_volume(const ChartMetric& m);

}  // namespace qcf
