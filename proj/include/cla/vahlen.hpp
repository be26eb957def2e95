#pragma once

#include "cla/multivector.hpp"

namespace cla {

// 2x2 matrix with Clifford entries acting on paravectors by
// x -> (ax + b)(cx + d)^{-1}. Members of the special Ahlfors-Vahlen group
// satisfy a reversion(d) - b reversion(c) = 1 and have paravector products
// a~c, c~d, d~b, b~c.
struct VahlenMatrix {
    Multivector a, b, c, d;

    int dim() const { return a.dim(); }

    static VahlenMatrix identity(int dim);
    // [[1, omega], [0, 1]]; omega any multivector (a paravector for the
    // translation generators used here).
    static VahlenMatrix translation(const Multivector& omega);
    // J = [[0, -1], [1, 0]].
    static VahlenMatrix inversion(int dim);
};

// Pseudo-determinant a reversion(d) - b reversion(c).
Multivector pseudo_determinant(const VahlenMatrix& m);

// Checks the SAV(n) conditions within tol: pseudo-determinant 1 and the four
// paravector-product constraints.
bool is_vahlen(const VahlenMatrix& m, double tol = 1e-10);

VahlenMatrix matrix_mul(const VahlenMatrix& m1, const VahlenMatrix& m2);

// Inverse of a pseudo-determinant-1 Vahlen matrix:
// [[rev(d), -rev(b)], [-rev(c), rev(a)]].
VahlenMatrix matrix_inverse(const VahlenMatrix& m);

// The Moebius denominator cx + d as a Clifford element.
Multivector moebius_denominator(const VahlenMatrix& m, const Paravector& x);

// Fractional-linear action (ax + b)(cx + d)^{-1}. Throws pole_error when
// cx + d is singular; throws std::invalid_argument if the image fails to be
// a paravector within tolerance (i.e. m is not Vahlen).
Paravector mobius_apply(const VahlenMatrix& m, const Paravector& x, double tol = 1e-9);

// Weight factor conj(cx + d) / |cx + d|^n with n the vector-space dimension
// (one less than the ambient dimension of x). This is the factor appearing
// in front of every automorphic kernel term.
Multivector automorphy_factor(const VahlenMatrix& m, const Paravector& x);

// Squared Frobenius norm of the bottom row, |c|^2 + |d|^2; the pruning and
// truncation weight for all orbit sums.
double bottom_row_norm_sq(const VahlenMatrix& m);

// Discrete translation action on R^{n+1}: shifts the first p coordinates by
// the integer tuple. With twisted set (which requires p == ambient
// dimension), the last coordinate transforms as (-1)^{m_last} x + m_last,
// the Klein-bottle action.
struct LatticeAction {
    int p = 1;
    bool twisted = false;
};

std::vector<double> lattice_action_apply(const LatticeAction& act,
                                         const std::vector<long>& m,
                                         const std::vector<double>& x);

}  // namespace cla
