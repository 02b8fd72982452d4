#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qcf {

// Index symmetry classes a tensor may declare. Declared symmetries are
// verified on checked construction against a relative tolerance.
enum class Sym {
    none,
    symmetric_pair,  // rank 2, T_ij = T_ji
    riemann,         // rank 4, antisym (ij), antisym (kl), pair exchange, first Bianchi
    weyl,            // riemann plus all single traces zero
    cotton,          // rank 3, T_ijk = -T_jik, cyclic sum zero
};

// Metric and its inverse at a single point. Construction via from_components
// runs a Cholesky factorization, which also certifies positive-definiteness.
struct MetricAtPoint {
    int dim = 0;
    std::vector<double> g;     // row-major dim*dim
    std::vector<double> ginv;  // row-major dim*dim
    bool diagonal = false;     // true if g (hence ginv) is diagonal

    double operator()(int i, int j) const { return g[i * dim + j]; }
    double inv(int i, int j) const { return ginv[i * dim + j]; }

    static MetricAtPoint identity(int n);
    // Throws std::invalid_argument if g is not symmetric positive-definite.
    static MetricAtPoint from_components(int n, std::vector<double> g);

    double det() const;
};

// Dense real tensor of rank 0..4 at a point, all indices lowered.
class LabeledTensor {
  public:
    LabeledTensor() = default;
    LabeledTensor(int dim, int rank, Sym sym = Sym::none);

    // Validates the declared symmetry (relative tolerance 1e-9 against the
    // max component); weyl traces are checked against `companion` when given,
    // identity otherwise. Throws std::invalid_argument on violation.
    static LabeledTensor checked(int dim, int rank, Sym sym, std::vector<double> comps,
                                 const MetricAtPoint* companion = nullptr);

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    Sym sym() const { return sym_; }
    std::size_t size() const { return c_.size(); }

    const std::vector<double>& data() const { return c_; }
    std::vector<double>& data() { return c_; }

    double& operator[](std::size_t k) { return c_[k]; }
    double operator[](std::size_t k) const { return c_[k]; }

    double& at() { return c_[0]; }
    double at() const { return c_[0]; }
    double& at(int i) { return c_[static_cast<std::size_t>(i)]; }
    double at(int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& at(int i, int j) { return c_[static_cast<std::size_t>(i) * dim_ + j]; }
    double at(int i, int j) const { return c_[static_cast<std::size_t>(i) * dim_ + j]; }
    double& at(int i, int j, int k) {
        return c_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
    }
    double at(int i, int j, int k) const {
        return c_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
    }
    double& at(int i, int j, int k, int l) {
        return c_[((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
    }
    double at(int i, int j, int k, int l) const {
        return c_[((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
    }

    double max_abs() const;

    // Max violation of the declared symmetry, in absolute terms.
    double symmetry_violation(const MetricAtPoint* companion = nullptr) const;

  private:
    int dim_ = 0;
    int rank_ = 0;
    Sym sym_ = Sym::none;
    std::vector<double> c_;
};

// a + b, alpha*a + beta*b, and scaling; dims/ranks must match.
LabeledTensor axpby(double alpha, const LabeledTensor& a, double beta, const LabeledTensor& b);
LabeledTensor scaled(const LabeledTensor& a, double alpha);

// Contraction of a and b over the listed index pairs (position in a, position
// in b), with an inverse-metric factor inserted per pair. Result indices are
// the free indices of a followed by the free indices of b. The result rank
// must stay <= 4.
LabeledTensor contract(const LabeledTensor& a, const LabeledTensor& b,
                       const std::vector<std::pair<int, int>>& pairs, const MetricAtPoint& g);

// Scalar contraction over all indices, i-th of a against i-th of b.
double full_contract(const LabeledTensor& a, const LabeledTensor& b, const MetricAtPoint& g);

// |a|^2 = full self-contraction.
double norm2(const LabeledTensor& a, const MetricAtPoint& g);

// Metric trace of a symmetric rank-2 tensor.
double trace(const LabeledTensor& a, const MetricAtPoint& g);

// a - (tr_g a / n) g for symmetric rank-2 a.
LabeledTensor tracefree_part(const LabeledTensor& a, const MetricAtPoint& g);

// Assembles a riemann-type tensor from its irreducible parts:
//   Rm = W + (E (*) g)/(n-2) + R (g (*) g)/(n(n-1)) pattern
// using the standard decomposition in dimension n >= 3.
LabeledTensor riemann_from_parts(const LabeledTensor& W, const LabeledTensor& E, double R,
                                 const MetricAtPoint& g);

// Random generators (identity companion metric). All deterministic per seed.
LabeledTensor random_symmetric(int dim, std::uint64_t seed);
LabeledTensor random_tracefree_symmetric(int dim, std::uint64_t seed);
LabeledTensor random_riemann_like(int dim, std::uint64_t seed);
// Trace-free projection of a random riemann-type tensor; zero tensor for dim 3.
LabeledTensor random_weyl_like(int dim, std::uint64_t seed);

}  // namespace qcf
