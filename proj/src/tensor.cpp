#include "qcf/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qcf {

namespace {

std::size_t pow_n(int n, int r) {
    std::size_t v = 1;
    for (int i = 0; i < r; ++i) v *= static_cast<std::size_t>(n);
    return v;
}

// Cholesky factor of a symmetric matrix; throws if a pivot is not positive.
std::vector<double> cholesky(int n, const std::vector<double>& a) {
    std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
            if (i == j) {
                if (s <= 0.0) throw std::invalid_argument("metric not positive-definite");
                L[i * n + i] = std::sqrt(s);
            } else {
                L[i * n + j] = s / L[j * n + j];
            }
        }
    }
    return L;
}

}  // namespace

MetricAtPoint MetricAtPoint::identity(int n) {
    MetricAtPoint m;
    m.dim = n;
    m.g.assign(static_cast<std::size_t>(n) * n, 0.0);
    m.ginv = m.g;
    for (int i = 0; i < n; ++i) {
        m.g[i * n + i] = 1.0;
        m.ginv[i * n + i] = 1.0;
    }
    m.diagonal = true;
    return m;
}

MetricAtPoint MetricAtPoint::from_components(int n, std::vector<double> g) {
    if (n < 2) throw std::invalid_argument("metric dimension must be >= 2");
    if (g.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("metric component count mismatch");
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(g[i * n + j] - g[j * n + i]) > 1e-12 * std::max(gmax, 1.0))
                throw std::invalid_argument("metric not symmetric");

    MetricAtPoint m;
    m.dim = n;
    m.g = std::move(g);

    std::vector<double> L = cholesky(n, m.g);
    // invert L, then ginv = L^{-T} L^{-1}
    std::vector<double> Li(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        Li[i * n + i] = 1.0 / L[i * n + i];
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int k = i; k < j; ++k) s -= L[j * n + k] * Li[k * n + i];
            Li[j * n + i] = s / L[j * n + j];
        }
    }
    m.ginv.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = std::max(i, j); k < n; ++k) s += Li[k * n + i] * Li[k * n + j];
            m.ginv[i * n + j] = s;
        }

    m.diagonal = true;
    for (int i = 0; i < n && m.diagonal; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && m.g[i * n + j] != 0.0) {
                m.diagonal = false;
                break;
            }
    return m;
}

double MetricAtPoint::det() const {
    std::vector<double> L = cholesky(dim, g);
    double d = 1.0;
    for (int i = 0; i < dim; ++i) d *= L[i * dim + i];
    return d * d;
}

LabeledTensor::LabeledTensor(int dim, int rank, Sym sym) : dim_(dim), rank_(rank), sym_(sym) {
    if (dim < 2 || rank < 0 || rank > 4) throw std::invalid_argument("bad tensor shape");
    c_.assign(pow_n(dim, rank), 0.0);
}

double LabeledTensor::max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

double LabeledTensor::symmetry_violation(const MetricAtPoint* companion) const {
    const int n = dim_;
    double worst = 0.0;
    auto upd = [&](double v) { worst = std::max(worst, std::abs(v)); };
    switch (sym_) {
        case Sym::none:
            break;
        case Sym::symmetric_pair:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < i; ++j) upd(at(i, j) - at(j, i));
            break;
        case Sym::cotton:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        upd(at(i, j, k) + at(j, i, k));
                        upd(at(i, j, k) + at(j, k, i) + at(k, i, j));
                    }
            break;
        case Sym::weyl:
        case Sym::riemann: {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l) {
                            upd(at(i, j, k, l) + at(j, i, k, l));
                            upd(at(i, j, k, l) + at(i, j, l, k));
                            upd(at(i, j, k, l) - at(k, l, i, j));
                            upd(at(i, j, k, l) + at(j, k, i, l) + at(k, i, j, l));
                        }
            if (sym_ == Sym::weyl) {
                MetricAtPoint id;
                const MetricAtPoint& g = companion ? *companion : (id = MetricAtPoint::identity(n));
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k) {
                        double tr = 0.0;
                        for (int j = 0; j < n; ++j)
                            for (int l = 0; l < n; ++l) tr += g.inv(j, l) * at(i, j, k, l);
                        upd(tr);
                    }
            }
            break;
        }
    }
    return worst;
}

LabeledTensor LabeledTensor::checked(int dim, int rank, Sym sym, std::vector<double> comps,
                                     const MetricAtPoint* companion) {
    LabeledTensor t(dim, rank, sym);
    if (comps.size() != t.c_.size()) throw std::invalid_argument("component count mismatch");
    t.c_ = std::move(comps);
    double scale = std::max(t.max_abs(), 1e-300);
    if (t.symmetry_violation(companion) > 1e-9 * scale)
        throw std::invalid_argument("declared symmetry violated");
    return t;
}

LabeledTensor axpby(double alpha, const LabeledTensor& a, double beta, const LabeledTensor& b) {
    if (a.dim() != b.dim() || a.rank() != b.rank())
        throw std::invalid_argument("axpby shape mismatch");
    LabeledTensor r(a.dim(), a.rank(), a.sym() == b.sym() ? a.sym() : Sym::none);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = alpha * a[k] + beta * b[k];
    return r;
}

LabeledTensor scaled(const LabeledTensor& a, double alpha) {
    LabeledTensor r = a;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] *= alpha;
    return r;
}

LabeledTensor contract(const LabeledTensor& a, const LabeledTensor& b,
                       const std::vector<std::pair<int, int>>& pairs, const MetricAtPoint& g) {
    const int n = a.dim();
    if (b.dim() != n || g.dim != n) throw std::invalid_argument("contract dimension mismatch");
    const int ra = a.rank(), rb = b.rank();
    const int p = static_cast<int>(pairs.size());
    std::array<bool, 4> used_a{}, used_b{};
    for (auto [ia, ib] : pairs) {
        if (ia < 0 || ia >= ra || ib < 0 || ib >= rb || used_a[ia] || used_b[ib])
            throw std::invalid_argument("invalid contraction pair");
        used_a[ia] = true;
        used_b[ib] = true;
    }
    std::vector<int> fa, fb;
    for (int i = 0; i < ra; ++i)
        if (!used_a[i]) fa.push_back(i);
    for (int i = 0; i < rb; ++i)
        if (!used_b[i]) fb.push_back(i);
    const int rr = static_cast<int>(fa.size() + fb.size());
    if (rr > 4) throw std::invalid_argument("contraction result rank exceeds 4");

    LabeledTensor res(n, rr);
    const std::size_t nr = res.size();

    std::array<int, 4> ai{}, bi{};
    std::array<int, 4> sv{};  // summed values, one per pair (diagonal) or 2p (general)

    auto a_flat = [&]() {
        std::size_t f = 0;
        for (int i = 0; i < ra; ++i) f = f * n + ai[i];
        return f;
    };
    auto b_flat = [&]() {
        std::size_t f = 0;
        for (int i = 0; i < rb; ++i) f = f * n + bi[i];
        return f;
    };

    for (std::size_t out = 0; out < nr; ++out) {
        // decode output multi-index into free slots
        std::size_t rem = out;
        for (int i = rr - 1; i >= 0; --i) {
            int v = static_cast<int>(rem % n);
            rem /= n;
            if (i < static_cast<int>(fa.size()))
                ai[fa[i]] = v;
            else
                bi[fb[i - fa.size()]] = v;
        }
        double acc = 0.0;
        if (g.diagonal) {
            sv.fill(0);
            while (true) {
                double w = 1.0;
                for (int k = 0; k < p; ++k) {
                    ai[pairs[k].first] = sv[k];
                    bi[pairs[k].second] = sv[k];
                    w *= g.inv(sv[k], sv[k]);
                }
                acc += w * a[a_flat()] * b[b_flat()];
                int k = 0;
                for (; k < p; ++k) {
                    if (++sv[k] < n) break;
                    sv[k] = 0;
                }
                if (k == p) break;
                if (p == 0) break;
            }
        } else {
            std::array<int, 8> uv{};  // (u_k, v_k) per pair
            while (true) {
                double w = 1.0;
                for (int k = 0; k < p; ++k) {
                    ai[pairs[k].first] = uv[2 * k];
                    bi[pairs[k].second] = uv[2 * k + 1];
                    w *= g.inv(uv[2 * k], uv[2 * k + 1]);
                }
                acc += w * a[a_flat()] * b[b_flat()];
                int k = 0;
                for (; k < 2 * p; ++k) {
                    if (++uv[k] < n) break;
                    uv[k] = 0;
                }
                if (k == 2 * p) break;
                if (p == 0) break;
            }
        }
        res[out] = acc;
        if (p == 0 && rr == 0) break;
    }
    return res;
}

double full_contract(const LabeledTensor& a, const LabeledTensor& b, const MetricAtPoint& g) {
    if (a.rank() != b.rank()) throw std::invalid_argument("full_contract rank mismatch");
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < a.rank(); ++i) pairs.emplace_back(i, i);
    return contract(a, b, pairs, g).at();
}

double norm2(const LabeledTensor& a, const MetricAtPoint& g) { return full_contract(a, a, g); }

double trace(const LabeledTensor& a, const MetricAtPoint& g) {
    if (a.rank() != 2) throw std::invalid_argument("trace needs rank 2");
    const int n = a.dim();
    double tr = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += g.inv(i, j) * a.at(i, j);
    return tr;
}

LabeledTensor tracefree_part(const LabeledTensor& a, const MetricAtPoint& g) {
    const int n = a.dim();
    const double tr = trace(a, g);
    LabeledTensor r(n, 2, Sym::symmetric_pair);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = a.at(i, j) - (tr / n) * g(i, j);
    return r;
}

LabeledTensor riemann_from_parts(const LabeledTensor& W, const LabeledTensor& E, double R,
                                 const MetricAtPoint& g) {
    const int n = g.dim;
    if (n < 3) throw std::invalid_argument("dimension must be >= 3");
    LabeledTensor Rm(n, 4, Sym::riemann);
    const double cR = R / (static_cast<double>(n) * (n - 1));
    const double cE = 1.0 / (n - 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = W.at(i, j, k, l);
                    v += cE * (E.at(i, k) * g(j, l) - E.at(i, l) * g(j, k) +
                               E.at(j, l) * g(i, k) - E.at(j, k) * g(i, l));
                    v += cR * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
                    Rm.at(i, j, k, l) = v;
                }
    return Rm;
}

LabeledTensor random_symmetric(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LabeledTensor t(dim, 2, Sym::symmetric_pair);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            double v = u(rng);
            t.at(i, j) = v;
            t.at(j, i) = v;
        }
    return t;
}

LabeledTensor random_tracefree_symmetric(int dim, std::uint64_t seed) {
    LabeledTensor t = random_symmetric(dim, seed);
    return tracefree_part(t, MetricAtPoint::identity(dim));
}

LabeledTensor random_riemann_like(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = dim;
    LabeledTensor raw(n, 4);
    for (std::size_t k = 0; k < raw.size(); ++k) raw[k] = u(rng);

    // antisymmetrize (ij), (kl); symmetrize pair exchange
    LabeledTensor t(n, 4);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = raw.at(i, j, k, l) - raw.at(j, i, k, l) - raw.at(i, j, l, k) +
                               raw.at(j, i, l, k);
                    v += raw.at(k, l, i, j) - raw.at(l, k, i, j) - raw.at(k, l, j, i) +
                         raw.at(l, k, j, i);
                    t.at(i, j, k, l) = 0.125 * v;
                }
    // project out the fully antisymmetric (Bianchi-violating) part
    LabeledTensor r(n, 4, Sym::riemann);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double b = t.at(i, j, k, l) + t.at(j, k, i, l) + t.at(k, i, j, l);
                    r.at(i, j, k, l) = t.at(i, j, k, l) - b / 3.0;
                }
    return r;
}

LabeledTensor random_weyl_like(int dim, std::uint64_t seed) {
    if (dim < 3) throw std::invalid_argument("dimension must be >= 3");
    if (dim == 3) return LabeledTensor(3, 4, Sym::weyl);
    const int n = dim;
    const MetricAtPoint g = MetricAtPoint::identity(n);
    LabeledTensor Rm = random_riemann_like(n, seed);

    LabeledTensor ric(n, 2, Sym::symmetric_pair);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += Rm.at(i, j, k, j);
            ric.at(i, k) = s;
        }
    double R = 0.0;
    for (int i = 0; i < n; ++i) R += ric.at(i, i);
    LabeledTensor E = tracefree_part(ric, g);

    LabeledTensor W(n, 4, Sym::weyl);
    const double cE = 1.0 / (n - 2);
    const double cR = R / (static_cast<double>(n) * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = Rm.at(i, j, k, l);
                    v -= cE * (E.at(i, k) * g(j, l) - E.at(i, l) * g(j, k) +
                               E.at(j, l) * g(i, k) - E.at(j, k) * g(i, l));
                    v -= cR * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
                    W.at(i, j, k, l) = v;
                }
    return W;
}

}  // namespace qcf
