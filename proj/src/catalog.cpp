#include <quadmath.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "qcf/chart_metric.hpp"

namespace qcf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double t_sin(double x) { return std::sin(x); }
inline double t_cos(double x) { return std::cos(x); }
inline double t_exp(double x) { return std::exp(x); }
inline __float128 t_sin(__float128 x) { return sinq(x); }
inline __float128 t_cos(__float128 x) { return cosq(x); }
inline __float128 t_exp(__float128 x) { return expq(x); }

template <class T>
void fs_eval(const FourierSeries& f, T x, T& v, T& d1, T& d2) {
    v = T(f.a0);
    d1 = T(0);
    d2 = T(0);
    for (std::size_t k = 0; k < f.cosc.size(); ++k) {
        const T kk = T(static_cast<double>(k + 1));
        const T c = t_cos(kk * x), s = t_sin(kk * x);
        v += T(f.cosc[k]) * c;
        d1 -= T(f.cosc[k]) * kk * s;
        d2 -= T(f.cosc[k]) * kk * kk * c;
    }
    for (std::size_t k = 0; k < f.sinc.size(); ++k) {
        const T kk = T(static_cast<double>(k + 1));
        const T c = t_cos(kk * x), s = t_sin(kk * x);
        v += T(f.sinc[k]) * s;
        d1 += T(f.sinc[k]) * kk * c;
        d2 -= T(f.sinc[k]) * kk * kk * s;
    }
}

// Diagonal coefficients of the unit round sphere S^k in hyperspherical
// angles phi_0..phi_{k-1}: s_i = prod_{j<i} sin^2 phi_j, plus first and
// second partials. Layouts: s[k], ds[m*k+i], d2s[(m*k+l)*k+i].
template <class T>
void sphere_diag(int k, const T* phi, T* s, T* ds, T* d2s) {
    T sn[kMaxDim], cs[kMaxDim], sq[kMaxDim];
    for (int j = 0; j < k; ++j) {
        sn[j] = t_sin(phi[j]);
        cs[j] = t_cos(phi[j]);
        sq[j] = sn[j] * sn[j];
    }
    auto prod_excl = [&](int i, int e1, int e2) {
        T p = T(1);
        for (int j = 0; j < i; ++j) {
            if (j == e1 || j == e2) continue;
            p *= sq[j];
        }
        return p;
    };
    for (int i = 0; i < k; ++i) s[i] = prod_excl(i, -1, -1);
    if (ds) {
        for (int i = 0; i < k * k; ++i) ds[i] = T(0);
        for (int m = 0; m < k; ++m)
            for (int i = m + 1; i < k; ++i)
                ds[m * k + i] = T(2) * sn[m] * cs[m] * prod_excl(i, m, -1);
    }
    if (d2s) {
        for (int i = 0; i < k * k * k; ++i) d2s[i] = T(0);
        for (int m = 0; m < k; ++m)
            for (int l = 0; l < k; ++l)
                for (int i = std::max(m, l) + 1; i < k; ++i) {
                    T v;
                    if (m == l) {
                        v = T(2) * (cs[m] * cs[m] - sq[m]) * prod_excl(i, m, -1);
                    } else {
                        v = T(4) * sn[m] * cs[m] * sn[l] * cs[l] * prod_excl(i, m, l);
                    }
                    d2s[(m * k + l) * k + i] = v;
                }
    }
}

// Shared chart data: a circle block (optional) followed by one or two sphere
// blocks, an optional warp f(theta)^2 on the first sphere block, and an
// optional conformal factor e^{2u(x_0)} on everything. Covers every catalog
// entry, so the derivative bookkeeping lives in one place.
struct ChartDef {
    int dim = 0;
    int circle = 0;      // 1 if coord 0 is a circle
    double circle_g = 1.0;
    int s1 = 0;          // coords of first sphere block
    double r1 = 1.0;
    int s2 = 0;          // coords of second sphere block
    double r2 = 1.0;
    int torus = 0;       // flat torus coords (exclusive with the rest)
    FourierSeries warp;  // f(theta) = r1 + warp(theta); requires circle == 1
    bool warped = false;
    FourierSeries conf;  // u(x_0)
    bool conformal = false;

    template <class T>
    void eval_t(const double* x0, T* g, T* dg, T* d2g) const;

    void eval(const double* x, double* g, double* dg, double* d2g) const {
        eval_t<double>(x, g, dg, d2g);
    }
};

template <class T>
void ChartDef::eval_t(const double* x0, T* g, T* dg, T* d2g) const {
    const int n = dim;
    const std::size_t n2 = static_cast<std::size_t>(n) * n;
    T x[kMaxDim];
    for (int i = 0; i < n; ++i) x[i] = T(x0[i]);
    for (std::size_t i = 0; i < n2; ++i) g[i] = T(0);
    if (dg)
        for (std::size_t i = 0; i < n2 * n; ++i) dg[i] = T(0);
    if (d2g)
        for (std::size_t i = 0; i < n2 * n * n; ++i) d2g[i] = T(0);

    auto G = [&](int i, int j) -> T& { return g[i * n + j]; };
    auto DG = [&](int k, int i, int j) -> T& { return dg[(k * n + i) * n + j]; };
    auto D2G = [&](int k, int l, int i, int j) -> T& {
        return d2g[((static_cast<std::size_t>(k) * n + l) * n + i) * n + j];
    };

    if (torus > 0) {
        for (int i = 0; i < n; ++i) G(i, i) = T(1);
    } else {
        int off = 0;
        if (circle) {
            G(0, 0) = T(circle_g);
            off = 1;
        }
        if (s1 > 0) {
            T s[kMaxDim], ds[kMaxDim * kMaxDim], d2s[kMaxDim * kMaxDim * kMaxDim];
            sphere_diag<T>(s1, x + off, s, dg ? ds : nullptr, d2g ? d2s : nullptr);
            T F = T(r1) * T(r1), F1 = T(0), F2 = T(0);
            if (warped) {
                T w, wp, wpp;
                fs_eval(warp, x[0], w, wp, wpp);
                const T f = T(r1) + w;
                F = f * f;
                F1 = T(2) * f * wp;
                F2 = T(2) * (wp * wp + f * wpp);
            }
            for (int i = 0; i < s1; ++i) {
                const int gi = off + i;
                G(gi, gi) = F * s[i];
                if (dg) {
                    for (int m = 0; m < s1; ++m) DG(off + m, gi, gi) = F * ds[m * s1 + i];
                    if (warped) DG(0, gi, gi) = F1 * s[i];
                }
                if (d2g) {
                    for (int m = 0; m < s1; ++m)
                        for (int l = 0; l < s1; ++l)
                            D2G(off + m, off + l, gi, gi) = F * d2s[(m * s1 + l) * s1 + i];
                    if (warped) {
                        D2G(0, 0, gi, gi) = F2 * s[i];
                        for (int m = 0; m < s1; ++m) {
                            D2G(0, off + m, gi, gi) = F1 * ds[m * s1 + i];
                            D2G(off + m, 0, gi, gi) = F1 * ds[m * s1 + i];
                        }
                    }
                }
            }
            off += s1;
        }
        if (s2 > 0) {
            T s[kMaxDim], ds[kMaxDim * kMaxDim], d2s[kMaxDim * kMaxDim * kMaxDim];
            sphere_diag<T>(s2, x + off, s, dg ? ds : nullptr, d2g ? d2s : nullptr);
            const T F = T(r2) * T(r2);
            for (int i = 0; i < s2; ++i) {
                const int gi = off + i;
                G(gi, gi) = F * s[i];
                if (dg)
                    for (int m = 0; m < s2; ++m) DG(off + m, gi, gi) = F * ds[m * s2 + i];
                if (d2g)
                    for (int m = 0; m < s2; ++m)
                        for (int l = 0; l < s2; ++l)
                            D2G(off + m, off + l, gi, gi) = F * d2s[(m * s2 + l) * s2 + i];
            }
        }
    }

    if (conformal) {
        T u, u1, u2;
        fs_eval(conf, x[0], u, u1, u2);
        const T h = t_exp(T(2) * u);
        if (d2g) {
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            T v = D2G(k, l, i, j);
                            if (k == 0) v += T(2) * u1 * DG(l, i, j);
                            if (l == 0) v += T(2) * u1 * DG(k, i, j);
                            if (k == 0 && l == 0) v += (T(2) * u2 + T(4) * u1 * u1) * G(i, j);
                            D2G(k, l, i, j) = h * v;
                        }
        }
        if (dg) {
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        T v = DG(k, i, j);
                        if (k == 0) v += T(2) * u1 * G(i, j);
                        DG(k, i, j) = h * v;
                    }
        }
        for (std::size_t i = 0; i < n2; ++i) g[i] *= h;
    }
}

bool nonconstant(const FourierSeries& f) {
    for (double v : f.cosc)
        if (v != 0.0) return true;
    for (double v : f.sinc)
        if (v != 0.0) return true;
    return false;
}

void add_circle(ChartMetric& m, double g00, int res) {
    m.coords.push_back({0.0, kTwoPi, true});
    m.res.push_back(res);
    m.depends.push_back(false);
    (void)g00;
}

void add_sphere_coords(ChartMetric& m, int k, const CatalogParams& p) {
    for (int i = 0; i < k; ++i) {
        const bool last = (i == k - 1);
        m.coords.push_back({last ? 0.0 : 0.0, last ? kTwoPi : std::numbers::pi, last});
        m.res.push_back(last ? p.res_periodic : p.res_polar);
        m.depends.push_back(!last);
    }
}

ChartMetric finish(ChartMetric m, std::shared_ptr<ChartDef> def) {
    m.dim = static_cast<int>(m.coords.size());
    def->dim = m.dim;
    m.g_raw = [def](const double* x, double* g) { def->eval(x, g, nullptr, nullptr); };
    m.dg_raw = [def, n = m.dim](const double* x, double* dg) {
        double g[kMaxDim * kMaxDim];
        (void)n;
        def->eval(x, g, dg, nullptr);
    };
    m.d2g_raw = [def](const double* x, double* d2g) {
        double g[kMaxDim * kMaxDim];
        double dg[kMaxDim * kMaxDim * kMaxDim];
        def->eval(x, g, dg, d2g);
    };
    m.eval_hp_raw = [def](const double* x, __float128* g, __float128* dg, __float128* d2g) {
        def->eval_t<__float128>(x, g, dg, d2g);
    };
    m.build_quadrature();
    return m;
}

}  // namespace

std::vector<std::string> catalog_ids() {
    return {"flat_torus",      "round_sphere",         "product_circle_sphere",
            "product_spheres", "warped_circle_sphere", "conformal"};
}

ChartMetric build_metric(const std::string& id, const CatalogParams& p) {
    auto def = std::make_shared<ChartDef>();
    ChartMetric m;
    m.label = id;

    if (id == "flat_torus") {
        if (p.n < 2 || p.n > kMaxDim) throw std::invalid_argument("flat_torus: bad dimension");
        if (!(p.side > 0.0)) throw std::invalid_argument("flat_torus: side must be positive");
        def->torus = p.n;
        for (int i = 0; i < p.n; ++i) {
            m.coords.push_back({0.0, p.side, true});
            m.res.push_back(p.res_periodic);
            m.depends.push_back(false);
        }
        return finish(std::move(m), def);
    }
    if (id == "round_sphere") {
        if (p.n < 2 || p.n > kMaxDim) throw std::invalid_argument("round_sphere: bad dimension");
        if (!(p.r > 0.0)) throw std::invalid_argument("round_sphere: radius must be positive");
        def->s1 = p.n;
        def->r1 = p.r;
        add_sphere_coords(m, p.n, p);
        return finish(std::move(m), def);
    }
    if (id == "product_circle_sphere") {
        if (p.n < 3 || p.n > kMaxDim)
            throw std::invalid_argument("product_circle_sphere: bad dimension");
        if (!(p.L > 0.0) || !(p.r > 0.0))
            throw std::invalid_argument("product_circle_sphere: radii must be positive");
        def->circle = 1;
        def->circle_g = p.L * p.L;
        def->s1 = p.n - 1;
        def->r1 = p.r;
        add_circle(m, p.L * p.L, p.res_periodic);
        add_sphere_coords(m, p.n - 1, p);
        return finish(std::move(m), def);
    }
    if (id == "product_spheres") {
        if (p.p < 2 || p.q < 2 || p.p + p.q > kMaxDim)
            throw std::invalid_argument("product_spheres: bad factor dimensions");
        if (!(p.a > 0.0) || !(p.b > 0.0))
            throw std::invalid_argument("product_spheres: radii must be positive");
        def->s1 = p.p;
        def->r1 = p.a;
        def->s2 = p.q;
        def->r2 = p.b;
        add_sphere_coords(m, p.p, p);
        add_sphere_coords(m, p.q, p);
        return finish(std::move(m), def);
    }
    if (id == "warped_circle_sphere") {
        if (p.n < 3 || p.n > kMaxDim)
            throw std::invalid_argument("warped_circle_sphere: bad dimension");
        def->circle = 1;
        def->circle_g = p.L * p.L;
        def->s1 = p.n - 1;
        def->r1 = p.r;
        def->warp = p.warp;
        def->warped = true;
        for (int i = 0; i < 1024; ++i) {
            const double th = kTwoPi * i / 1024.0;
            if (!(p.r + p.warp.eval(th) > 0.0))
                throw std::invalid_argument("warped_circle_sphere: warp not strictly positive");
        }
        add_circle(m, p.L * p.L, p.res_periodic);
        add_sphere_coords(m, p.n - 1, p);
        m.depends[0] = nonconstant(p.warp);
        return finish(std::move(m), def);
    }
    if (id == "conformal") {
        if (p.base.empty() || p.base == "conformal")
            throw std::invalid_argument("conformal: needs a non-conformal base id");
        CatalogParams bp = p;
        bp.base.clear();
        ChartMetric base = build_metric(p.base, bp);
        auto bdef = std::make_shared<ChartDef>();
        // rebuild the base definition rather than wrapping closures
        m = base;
        m.label = "conformal(" + p.base + ")";
        // reconstruct the ChartDef matching the base id
        if (p.base == "flat_torus") {
            bdef->torus = p.n;
        } else if (p.base == "round_sphere") {
            bdef->s1 = p.n;
            bdef->r1 = p.r;
        } else if (p.base == "product_circle_sphere") {
            bdef->circle = 1;
            bdef->circle_g = p.L * p.L;
            bdef->s1 = p.n - 1;
            bdef->r1 = p.r;
        } else if (p.base == "product_spheres") {
            bdef->s1 = p.p;
            bdef->r1 = p.a;
            bdef->s2 = p.q;
            bdef->r2 = p.b;
        } else if (p.base == "warped_circle_sphere") {
            bdef->circle = 1;
            bdef->circle_g = p.L * p.L;
            bdef->s1 = p.n - 1;
            bdef->r1 = p.r;
            bdef->warp = p.warp;
            bdef->warped = true;
        } else {
            throw std::invalid_argument("conformal: unsupported base id " + p.base);
        }
        if (!m.coords[0].periodic && !p.conf.cosine_only())
            throw std::invalid_argument(
                "conformal: sine modes not smooth on a polar first coordinate");
        bdef->conf = p.conf;
        bdef->conformal = true;
        ChartMetric out;
        out.label = m.label;
        out.coords = m.coords;
        out.res = m.res;
        out.depends = m.depends;
        if (nonconstant(p.conf)) out.depends[0] = true;
        return finish(std::move(out), bdef);
    }
    throw std::invalid_argument("unknown catalog id: " + id);
}

}  // namespace qcf
