#pragma once

#include <functional>

#include "cla/lattice.hpp"
#include "cla/voxel_domain.hpp"

namespace cla {

// Pluggable Cauchy kernel C(x, y) for the integral transforms. The flat
// kernel is q_0(y - x) / omega_d with omega_d the surface area of the unit
// sphere in R^d; the torus kernel adds the lattice translates.
struct KernelEvaluator {
    int ambient_dim = 0;
    // set by flat_kernel; lets the transforms take an allocation-free path
    bool flat = false;
    std::function<Multivector(const std::vector<double>& x,
                              const std::vector<double>& y)>
        eval;
};

KernelEvaluator flat_kernel(int ambient_dim);
// Truncated translate sum at radius R; rank must satisfy the torus kernel's
// convergence constraint (rank <= n - 1).
KernelEvaluator torus_kernel(const Lattice& lat, double R);

// (T_E f)(x) = -sum_cells of C(x, .) integrated against a per-cell linear
// model of f (adaptive Gauss panels). The singular self-cell contributes
// exactly zero: every component of q_0 is odd, so its mean over the centered
// cube vanishes. Cells where the value and the reconstructed slopes all
// vanish are skipped, so delta inputs cost O(cells).
Field teodorescu(const VoxelDomain& dom, const Field& f, const KernelEvaluator& k);
// Conjugated variant: kernel alpha(C(x, y)) (grade involution), the Cauchy
// kernel of the conjugated Dirac operator.
Field teodorescu_conj(const VoxelDomain& dom, const Field& f,
                      const KernelEvaluator& k);

// (F_Gamma g)(x) = sum_facets of C(x, .) n integrated against a per-facet
// quadratic model of g (slopes and axis curvatures from tangent-neighbor
// facets). Facets where the value, slopes and curvatures all vanish are
// skipped, so delta traces cost O(facets).
Field cauchy_transform(const VoxelDomain& dom, const BoundaryTrace& g,
                       const KernelEvaluator& k);
// Conjugated variant: alpha(C) alpha(n) g.
Field cauchy_transform_conj(const VoxelDomain& dom, const BoundaryTrace& g,
                            const KernelEvaluator& k);

// Max norm of F_Gamma(tr f) + T_E(D_fd f) - f over cells at least two cells
// away from the boundary.
double borel_pompeiu_residual(const VoxelDomain& dom, const Field& f,
                              const KernelEvaluator& k);

}  // namespace cla
