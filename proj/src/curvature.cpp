#include "qcf/curvature.hpp"

#include <quadmath.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcf {

namespace {

using Offs = std::array<int8_t, kMaxDim>;

std::size_t pow_n(int n, int r) {
    std::size_t v = 1;
    for (int i = 0; i < r; ++i) v *= static_cast<std::size_t>(n);
    return v;
}

// Curvature quantities obtainable from g, dg, d2g alone at one point.
struct BasicCurv {
    MetricAtPoint g;
    std::vector<double> Gamma;  // Gamma^p_{ij} -> [p*n*n + i*n + j]
    LabeledTensor Riemann, Ric, E, W;
    double R = 0.0;
};

// True when every off-diagonal entry of g, dg, d2g is exactly zero, so the
// reformulated orthogonal-coordinates curvature (numerically stable near
// chart poles) applies.
template <class T>
bool is_orthogonal(int n, const T* g, const T* dg, const T* d2g) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (g[i * n + j] != T(0)) return false;
            for (int k = 0; k < n; ++k) {
                if (dg[(k * n + i) * n + j] != T(0)) return false;
                for (int l = 0; l < n; ++l)
                    if (d2g[((static_cast<std::size_t>(k) * n + l) * n + i) * n + j] != T(0))
                        return false;
            }
        }
    return true;
}

// Orthogonal-coordinates (Lame coefficient) curvature in quadruple
// precision. Nested polar charts cancel catastrophically in double: the
// sectional-curvature brackets telescope across sphere levels, losing a
// factor ~d^6 in significance d away from a multi-pole corner. Quad inputs
// and quad assembly keep every stored double-precision output accurate.
bool basic_orthogonal_hp(const ChartMetric& m, const double* x, BasicCurv& b) {
    using Q = __float128;
    const int n = m.dim;
    const std::size_t n2 = pow_n(n, 2), n3 = pow_n(n, 3), n4 = pow_n(n, 4);
    std::vector<Q> g(n2), dg(n3), d2g(n4);
    m.eval_hp_raw(x, g.data(), dg.data(), d2g.data());
    if (!is_orthogonal<Q>(n, g.data(), dg.data(), d2g.data())) return false;
    const Q sc = Q(m.scale);
    for (auto& v : g) v *= sc;
    for (auto& v : dg) v *= sc;
    for (auto& v : d2g) v *= sc;
    auto DG = [&](int k, int i, int j) { return dg[(k * n + i) * n + j]; };
    auto D2G = [&](int k, int l, int i, int j) {
        return d2g[((static_cast<std::size_t>(k) * n + l) * n + i) * n + j];
    };

    Q H[kMaxDim];
    std::vector<Q> dH(n2), d2H(n3);
    for (int i = 0; i < n; ++i) H[i] = sqrtq(g[i * n + i]);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) dH[k * n + i] = DG(k, i, i) / (Q(2) * H[i]);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                d2H[(k * n + l) * n + i] =
                    (D2G(k, l, i, i) - Q(2) * dH[k * n + i] * dH[l * n + i]) / (Q(2) * H[i]);
    auto DH = [&](int k, int i) { return dH[k * n + i]; };
    auto D2H = [&](int k, int l, int i) { return d2H[(k * n + l) * n + i]; };

    b.Gamma.assign(n3, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                for (int p = 0; p < n; ++p)
                    b.Gamma[(p * n + i) * n + i] = static_cast<double>(
                        (p == i) ? DH(i, i) / H[i] : -H[i] * DH(p, i) / (H[p] * H[p]));
            } else {
                b.Gamma[(i * n + i) * n + j] = static_cast<double>(DH(j, i) / H[i]);
                b.Gamma[(i * n + j) * n + i] = b.Gamma[(i * n + i) * n + j];
            }
        }

    std::vector<Q> Rm(n4, Q(0));
    auto RM = [&](int i, int j, int k, int l) -> Q& {
        return Rm[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Q v = -H[i] * D2H(j, j, i) - H[j] * D2H(i, i, j) +
                  H[j] * DH(i, j) * DH(i, i) / H[i] + H[i] * DH(j, i) * DH(j, j) / H[j];
            for (int p = 0; p < n; ++p)
                if (p != i && p != j) v -= H[i] * H[j] * DH(p, i) * DH(p, j) / (H[p] * H[p]);
            RM(i, j, i, j) = v;
            RM(j, i, j, i) = v;
            RM(i, j, j, i) = -v;
            RM(j, i, i, j) = -v;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || i == k || j == k) continue;
                const Q w = H[i] * (-D2H(j, k, i) + DH(k, j) * DH(j, i) / H[j] +
                                    DH(j, k) * DH(k, i) / H[k]);
                RM(i, j, i, k) = w;
                RM(j, i, k, i) = w;
                RM(i, j, k, i) = -w;
                RM(j, i, i, k) = -w;
            }

    std::vector<Q> Ric(n2);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            Q s = Q(0);
            for (int j = 0; j < n; ++j) s += RM(i, j, k, j) / (H[j] * H[j]);
            Ric[i * n + k] = s;
        }
    Q R = Q(0);
    for (int i = 0; i < n; ++i) R += Ric[i * n + i] / (H[i] * H[i]);

    std::vector<Q> E(n2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            E[i * n + j] = Ric[i * n + j] - (i == j ? R / Q(n) * g[i * n + i] : Q(0));

    b.g = m.metric_at(x);
    b.R = static_cast<double>(R);
    b.Riemann = LabeledTensor(n, 4, Sym::riemann);
    for (std::size_t t = 0; t < n4; ++t) b.Riemann[t] = static_cast<double>(Rm[t]);
    b.Ric = LabeledTensor(n, 2, Sym::symmetric_pair);
    b.E = LabeledTensor(n, 2, Sym::symmetric_pair);
    for (std::size_t t = 0; t < n2; ++t) {
        b.Ric[t] = static_cast<double>(Ric[t]);
        b.E[t] = static_cast<double>(E[t]);
    }

    // Weyl has no pole cancellation of its own, so assemble it in double
    // from the quad-accurate pieces.
    b.W = LabeledTensor(n, 4, Sym::weyl);
    if (n >= 3) {
        const double cE = 1.0 / (n - 2);
        const double cR = b.R / (static_cast<double>(n) * (n - 1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double v = b.Riemann.at(i, j, k, l);
                        v -= cE * (b.E.at(i, k) * b.g(j, l) - b.E.at(i, l) * b.g(j, k) +
                                   b.E.at(j, l) * b.g(i, k) - b.E.at(j, k) * b.g(i, l));
                        v -= cR * (b.g(i, k) * b.g(j, l) - b.g(i, l) * b.g(j, k));
                        b.W.at(i, j, k, l) = v;
                    }
    }
    return true;
}

BasicCurv basic_at(const ChartMetric& m, const double* x) {
    const int n = m.dim;
    BasicCurv b;
    if (m.eval_hp_raw && basic_orthogonal_hp(m, x, b)) return b;

    b.g = m.metric_at(x);

    std::vector<double> dg(pow_n(n, 3)), d2g(pow_n(n, 4));
    m.d_metric(x, dg.data());
    m.d2_metric(x, d2g.data());
    auto DG = [&](int k, int i, int j) { return dg[(k * n + i) * n + j]; };
    auto D2G = [&](int k, int l, int i, int j) {
        return d2g[((static_cast<std::size_t>(k) * n + l) * n + i) * n + j];
    };

    b.Gamma.assign(pow_n(n, 3), 0.0);
    for (int p = 0; p < n; ++p)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int q = 0; q < n; ++q)
                    s += b.g.inv(p, q) * (DG(i, j, q) + DG(j, i, q) - DG(q, i, j));
                b.Gamma[(p * n + i) * n + j] = 0.5 * s;
            }
    auto Ga = [&](int p, int i, int j) { return b.Gamma[(p * n + i) * n + j]; };

    b.Riemann = LabeledTensor(n, 4, Sym::riemann);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = 0.5 * (D2G(j, k, i, l) + D2G(i, l, j, k) - D2G(j, l, i, k) -
                                      D2G(i, k, j, l));
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q)
                            v += b.g(p, q) * (Ga(p, j, k) * Ga(q, i, l) - Ga(p, j, l) * Ga(q, i, k));
                    b.Riemann.at(i, j, k, l) = v;
                }

    b.Ric = LabeledTensor(n, 2, Sym::symmetric_pair);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) s += b.g.inv(j, l) * b.Riemann.at(i, j, k, l);
            b.Ric.at(i, k) = s;
        }
    b.R = trace(b.Ric, b.g);
    b.E = tracefree_part(b.Ric, b.g);

    b.W = LabeledTensor(n, 4, Sym::weyl);
    const double cE = 1.0 / (n - 2);
    const double cR = b.R / (static_cast<double>(n) * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = b.Riemann.at(i, j, k, l);
                    v -= cE * (b.E.at(i, k) * b.g(j, l) - b.E.at(i, l) * b.g(j, k) +
                               b.E.at(j, l) * b.g(i, k) - b.E.at(j, k) * b.g(i, l));
                    v -= cR * (b.g(i, k) * b.g(j, l) - b.g(i, l) * b.g(j, k));
                    b.W.at(i, j, k, l) = v;
                }
    return b;
}

struct FrameCtx {
    const ChartMetric* m;
    const double* x0;
    int n;
    std::vector<double> h;
    std::unordered_map<std::uint64_t, BasicCurv> cache;

    static std::uint64_t key(const Offs& o) {
        std::uint64_t k = 0;
        for (int i = 0; i < kMaxDim; ++i) k = (k << 5) | static_cast<std::uint64_t>(o[i] + 16);
        return k;
    }

    const BasicCurv& basic(const Offs& o) {
        const std::uint64_t k = key(o);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        double x[kMaxDim];
        for (int i = 0; i < n; ++i) x[i] = x0[i] + o[i] * h[i];
        return cache.emplace(k, basic_at(*m, x)).first->second;
    }
};

using RawField = std::function<std::vector<double>(const Offs&)>;

// Covariant derivative of a tensor field given by components along the
// chart; 4th-order central differences for the partials, Christoffel
// corrections from the analytic metric. Derivative index appended last.
std::vector<double> covd_raw(FrameCtx& ctx, const Offs& base, int rank, const RawField& field) {
    const int n = ctx.n;
    const std::size_t sz = pow_n(n, rank);
    std::vector<double> out(sz * n, 0.0);

    // partials
    for (int c = 0; c < n; ++c) {
        if (!ctx.m->depends[c]) continue;
        Offs p1 = base, p2 = base, m1 = base, m2 = base;
        p1[c] += 1;
        p2[c] += 2;
        m1[c] -= 1;
        m2[c] -= 2;
        const std::vector<double> fp1 = field(p1), fp2 = field(p2), fm1 = field(m1),
                                  fm2 = field(m2);
        const double ih = 1.0 / (12.0 * ctx.h[c]);
        for (std::size_t i = 0; i < sz; ++i)
            out[i * n + c] = (-fp2[i] + 8.0 * fp1[i] - 8.0 * fm1[i] + fm2[i]) * ih;
    }

    // Christoffel corrections at the base point
    const BasicCurv& b = ctx.basic(base);
    auto Ga = [&](int p, int i, int j) { return b.Gamma[(p * n + i) * n + j]; };
    if (rank > 0) {
        const std::vector<double> f0 = field(base);
        std::array<int, 5> idx{};
        for (std::size_t flat = 0; flat < sz * n; ++flat) {
            std::size_t rem = flat;
            for (int a = rank; a >= 0; --a) {
                idx[a] = static_cast<int>(rem % n);
                rem /= n;
            }
            const int c = idx[rank];
            double corr = 0.0;
            for (int a = 0; a < rank; ++a) {
                const int ia = idx[a];
                // flat index of f0 with slot a replaced by mm
                std::size_t stride = pow_n(n, rank - 1 - a);
                std::size_t base_flat = flat / n;  // drop deriv index
                std::size_t without = base_flat - static_cast<std::size_t>(ia) * stride;
                for (int mm = 0; mm < n; ++mm)
                    corr += Ga(mm, c, ia) * f0[without + static_cast<std::size_t>(mm) * stride];
            }
            out[flat] -= corr;
        }
    }
    return out;
}

LabeledTensor to_tensor(int n, int rank, const std::vector<double>& raw, Sym sym = Sym::none) {
    LabeledTensor t(n, rank, sym);
    t.data() = raw;
    return t;
}

}  // namespace

CurvatureFrame frame_at(const ChartMetric& m, const double* x, const FrameOptions& opt) {
    const int n = m.dim;
    FrameCtx ctx{&m, x, n, m.fd_steps(opt.h_factor), {}};
    const Offs zero{};

    const BasicCurv& b0 = ctx.basic(zero);
    CurvatureFrame f;
    f.dim = n;
    for (int i = 0; i < n; ++i) f.x[i] = x[i];
    f.g = b0.g;
    f.Riemann = b0.Riemann;
    f.Ric = b0.Ric;
    f.E = b0.E;
    f.W = b0.W;
    f.R = b0.R;
    f.normRm2 = norm2(f.Riemann, f.g);
    f.normE2 = norm2(f.E, f.g);
    f.normW2 = norm2(f.W, f.g);

    if (!opt.derivatives) return f;

    RawField Rf = [&](const Offs& o) { return std::vector<double>{ctx.basic(o).R}; };
    RawField Ef = [&](const Offs& o) { return ctx.basic(o).E.data(); };
    RawField Ricf = [&](const Offs& o) { return ctx.basic(o).Ric.data(); };
    RawField Wf = [&](const Offs& o) { return ctx.basic(o).W.data(); };

    f.gradR = to_tensor(n, 1, covd_raw(ctx, zero, 0, Rf));

    RawField gradRf = [&](const Offs& o) { return covd_raw(ctx, o, 0, Rf); };
    {
        std::vector<double> h2 = covd_raw(ctx, zero, 1, gradRf);
        LabeledTensor hR(n, 2, Sym::symmetric_pair);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) hR.at(i, j) = 0.5 * (h2[i * n + j] + h2[j * n + i]);
        f.hessR = hR;
    }
    f.lapR = trace(f.hessR, f.g);
    f.hessR_tf = LabeledTensor(n, 2, Sym::symmetric_pair);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            f.hessR_tf.at(i, j) = f.hessR.at(i, j) - (f.lapR / n) * f.g(i, j);

    f.gradRic = to_tensor(n, 3, covd_raw(ctx, zero, 2, Ricf));
    f.gradE = to_tensor(n, 3, covd_raw(ctx, zero, 2, Ef));

    // Cotton tensor, Ricci form
    f.C = LabeledTensor(n, 3, Sym::cotton);
    const double cc = 1.0 / (2.0 * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                f.C.at(i, j, k) = f.gradRic.at(k, j, i) - f.gradRic.at(k, i, j) -
                                  cc * (f.gradR.at(i) * f.g(j, k) - f.gradR.at(j) * f.g(i, k));
    f.normC2 = norm2(f.C, f.g);

    RawField gradEf = [&](const Offs& o) { return covd_raw(ctx, o, 2, Ef); };
    f.covd2E = to_tensor(n, 4, covd_raw(ctx, zero, 3, gradEf));

    f.lapE = LabeledTensor(n, 2, Sym::symmetric_pair);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += f.g.inv(k, l) * f.covd2E.at(i, j, k, l);
            f.lapE.at(i, j) = s;
        }

    // divW_{ijk} = g^{lm} nabla_m W_{ijkl}
    {
        std::vector<double> cw = covd_raw(ctx, zero, 4, Wf);  // [i j k l m]
        f.divW = LabeledTensor(n, 3);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int l = 0; l < n; ++l)
                        for (int mm = 0; mm < n; ++mm)
                            s += f.g.inv(l, mm) *
                                 cw[(((static_cast<std::size_t>(i) * n + j) * n + k) * n + l) * n +
                                    mm];
                    f.divW.at(i, j, k) = s;
                }
    }

    // divC_{ij} = g^{km} nabla_m C_{kij}
    {
        RawField Cf = [&](const Offs& o) -> std::vector<double> {
            const BasicCurv& bb = ctx.basic(o);
            std::vector<double> gRic = covd_raw(ctx, o, 2, Ricf);
            std::vector<double> gR = covd_raw(ctx, o, 0, Rf);
            std::vector<double> c(pow_n(n, 3));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        c[(i * n + j) * n + k] =
                            gRic[(k * n + j) * n + i] - gRic[(k * n + i) * n + j] -
                            cc * (gR[i] * bb.g(j, k) - gR[j] * bb.g(i, k));
            return c;
        };
        std::vector<double> cC = covd_raw(ctx, zero, 3, Cf);  // [k i j m]
        f.divC = LabeledTensor(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    for (int mm = 0; mm < n; ++mm)
                        s += f.g.inv(k, mm) *
                             cC[((static_cast<std::size_t>(k) * n + i) * n + j) * n + mm];
                f.divC.at(i, j) = s;
            }
    }

    // scalar fields
    {
        RawField e2f = [&](const Offs& o) {
            const BasicCurv& bb = ctx.basic(o);
            return std::vector<double>{norm2(bb.E, bb.g)};
        };
        RawField grad_e2f = [&](const Offs& o) { return covd_raw(ctx, o, 0, e2f); };
        std::vector<double> hess_e2 = covd_raw(ctx, zero, 1, grad_e2f);
        double lap = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) lap += f.g.inv(i, j) * hess_e2[i * n + j];
        f.lap_normE2 = lap;
    }
    f.norm_gradE2 = norm2(f.gradE, f.g);
    {
        RawField absEf = [&](const Offs& o) {
            const BasicCurv& bb = ctx.basic(o);
            return std::vector<double>{std::sqrt(std::max(0.0, norm2(bb.E, bb.g)))};
        };
        std::vector<double> gAbsE = covd_raw(ctx, zero, 0, absEf);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += f.g.inv(i, j) * gAbsE[i] * gAbsE[j];
        f.grad_absE2 = s;
    }
    {
        double worst = 0.0;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    worst = std::max(worst, std::abs(f.gradE.at(k, j, i) - f.gradE.at(k, i, j)));
        f.codazzi_resid = worst;
    }
    return f;
}

std::vector<CurvatureFrame> frame_field(const ChartMetric& m, Exec exec, const FrameOptions& opt) {
    Grid grid(m);
    const std::size_t nn = grid.size();
    std::vector<CurvatureFrame> out(nn);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long k = 0; k < static_cast<long long>(nn); ++k) {
            double x[kMaxDim];
            grid.point(static_cast<std::size_t>(k), x);
            out[static_cast<std::size_t>(k)] = frame_at(m, x, opt);
        }
    } else {
        for (std::size_t k = 0; k < nn; ++k) {
            double x[kMaxDim];
            grid.point(k, x);
            out[k] = frame_at(m, x, opt);
        }
    }
    return out;
}

double check_weyl_reconstruction(const CurvatureFrame& f) {
    LabeledTensor rebuilt = riemann_from_parts(f.W, f.E, f.R, f.g);
    double worst = 0.0;
    for (std::size_t k = 0; k < rebuilt.size(); ++k)
        worst = std::max(worst, std::abs(rebuilt[k] - f.Riemann[k]));
    return worst;
}

double check_divweyl_cotton(const CurvatureFrame& f) {
    const int n = f.dim;
    if (n < 4) throw std::invalid_argument("divW-Cotton relation requires n >= 4");
    const double c = static_cast<double>(n - 3) / (n - 2);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                worst = std::max(worst, std::abs(f.divW.at(i, j, k) + c * f.C.at(i, j, k)));
    return worst;
}

double check_commutation(const CurvatureFrame& f) {
    const int n = f.dim;
    double worst = 0.0;
    LabeledTensor WE = contract(f.W, f.E, {{1, 0}, {3, 1}}, f.g);  // E_kl W_ikjl
    LabeledTensor EE = contract(f.E, f.E, {{1, 1}}, f.g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double lhs = 0.0;
            for (int k = 0; k < n; ++k)
                for (int kp = 0; kp < n; ++kp)
                    lhs += f.g.inv(k, kp) * f.covd2E.at(k, j, i, kp);
            double rhs = (n - 2.0) / (2.0 * n) * f.hessR.at(i, j) +
                         static_cast<double>(n) / (n - 2) * EE.at(i, j) +
                         f.R * f.E.at(i, j) / (n - 1.0) - WE.at(i, j) -
                         f.normE2 / (n - 2.0) * f.g(i, j);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    return worst;
}

LabeledTensor cotton_from_E(const CurvatureFrame& f) {
    const int n = f.dim;
    LabeledTensor c(n, 3, Sym::cotton);
    const double cc = (n - 2.0) / (2.0 * n * (n - 1.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                c.at(i, j, k) = f.gradE.at(k, j, i) - f.gradE.at(k, i, j) +
                                cc * (f.gradR.at(i) * f.g(j, k) - f.gradR.at(j) * f.g(i, k));
    return c;
}

double check_contracted_bianchi(const CurvatureFrame& f) {
    const int n = f.dim;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double div = 0.0;
        for (int k = 0; k < n; ++k)
            for (int kp = 0; kp < n; ++kp) div += f.g.inv(k, kp) * f.gradE.at(k, j, kp);
        worst = std::max(worst, std::abs(div - (n - 2.0) / (2.0 * n) * f.gradR.at(j)));
    }
    return worst;
}

}  // namespace qcf
