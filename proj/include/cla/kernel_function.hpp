#pragma once

#include <cstdint>
#include <string>

#include "cla/fd.hpp"
#include "cla/multivector.hpp"
#include "cla/polynomial.hpp"

namespace cla {

// Multi-index (m_0, ..., m_n) over the ambient coordinates.
using MultiIndex = std::vector<unsigned>;

inline unsigned multi_index_order(const MultiIndex& m) {
    unsigned s = 0;
    for (unsigned k : m) s += k;
    return s;
}

// Clifford-valued rational function N(x) / |x|^denom_exp on R^(ambient_dim),
// one numerator polynomial per blade of Cl_(ambient_dim - 1). The kernel q_0
// and all its derivatives live in this family: differentiation raises
// denom_exp by 2 and canonicalization removes common |x|^2 factors, so the
// representation is unique.
class RationalVectorFunction {
public:
    explicit RationalVectorFunction(int ambient_dim)
        : ambient_dim_(ambient_dim), denom_exp_(0) {}

    int ambient_dim() const { return ambient_dim_; }
    int clifford_dim() const { return ambient_dim_ - 1; }
    unsigned denom_exp() const { return denom_exp_; }
    const std::map<std::uint32_t, Polynomial>& numerators() const { return numerators_; }

    void set_numerator(std::uint32_t blade, Polynomial p);
    void add_numerator(std::uint32_t blade, const Polynomial& p);
    void set_denom_exp(unsigned k) { denom_exp_ = k; }

    bool is_zero() const { return numerators_.empty(); }

    // Removes zero numerators and divides out |x|^2 factors common to all
    // components while denom_exp permits.
    void canonicalize();

    // Common numerator degree if every component is homogeneous of one
    // degree; the function is then homogeneous of degree() - denom_exp.
    // Throws std::logic_error for inhomogeneous numerators.
    int numerator_degree() const;

private:
    int ambient_dim_;
    unsigned denom_exp_;
    std::map<std::uint32_t, Polynomial> numerators_;
};

// q_0(x) = conj(x) / |x|^(n+1) on R^(n+1): the monogenic Cauchy kernel,
// homogeneous of degree -n.
RationalVectorFunction cauchy_kernel_q0(int ambient_dim);

// Exact quotient-rule partial: (dN * |x|^2 - k * x_axis * N) / |x|^(k+2),
// canonicalized.
RationalVectorFunction symbolic_partial(const RationalVectorFunction& f, int axis);

// Iterated partials of q_0 per the multi-index (one order per ambient axis).
RationalVectorFunction q_m(int ambient_dim, const MultiIndex& m);

// Left application of the chosen first-order operator, exact. Blades mix
// through e_j multiplication; the result is canonical.
RationalVectorFunction dirac_apply_symbolic(const RationalVectorFunction& f,
                                            DiracVariant variant);

// Numeric evaluation. Throws pole_error within tol of the origin when a
// denominator is present.
Multivector evaluate(const RationalVectorFunction& f, const std::vector<double>& x,
                     double tol = 1e-9);

// Exact evaluation of the numerator vector at a rational point (denominator
// handled by the caller; |x|^k is generally irrational).
std::map<std::uint32_t, Rational> evaluate_numerators(const RationalVectorFunction& f,
                                                      const std::vector<Rational>& x);

// JSON round-trip with arbitrary-precision coefficients as decimal strings.
// from-side rejects unknown keys.
std::string kernel_to_json(const RationalVectorFunction& f);
RationalVectorFunction kernel_from_json(const std::string& text);

// Double-precision compilation for bulk evaluation in series sums.
// coeff_bound = sqrt(sum over blades of (sum |coeff|)^2): with homogeneous
// numerators of degree g it gives |f(x)| <= coeff_bound * |x|^(g - denom_exp)
// for |x| >= 1, the constant used by the series tail bounds.
struct CompiledKernel {
    int ambient_dim = 0;
    unsigned denom_exp = 0;
    int numerator_degree = 0;
    double coeff_bound = 0.0;
    struct Term {
        std::uint32_t blade;
        std::vector<unsigned> exps;
        double coeff;
    };
    std::vector<Term> terms;

    Multivector eval(const std::vector<double>& x) const;
    // Homogeneity degree of the function, numerator_degree - denom_exp.
    int homogeneity() const { return numerator_degree - static_cast<int>(denom_exp); }
};

CompiledKernel compile(const RationalVectorFunction& f);

}  // namespace cla
