#pragma once

#include <memory>
#include <vector>

#include "cla/transforms.hpp"
#include "cla/voxel_domain.hpp"

namespace cla {

struct BergmanOptions {
    // Tikhonov parameter relative to the largest singular value of the
    // boundary operator. The operator is rank deficient by nature (boundary
    // data whose Cauchy transform vanishes inside the domain lies in its
    // kernel), so some regularization is always required.
    double lambda_rel = 1e-10;
    // Bound on the effective condition sigma_max / max(sigma_min, lambda);
    // past it the system counts as singular beyond regularization and
    // construction raises conditioning_error.
    double condition_limit = 1e14;
};

// Dense realization of the Bergman projection
//
//     P = F_Gamma (tr conj(T_E) F_Gamma)^{-1} tr conj(T_E)
//
// on a voxel domain. P reproduces Cauchy transforms (discretely exact up to
// the regularization bias) and annihilates conj(D)-images of zero-trace
// fields, the two properties the Stokes chain rests on; for a self-adjoint
// Dirac operator conj(T_E) = T_E and this is the familiar
// F_Gamma (tr T_E F_Gamma)^{-1} tr T_E. The factors are assembled
// column-by-column by feeding delta fields (one cell or facet, scalar blade)
// through the very same teodorescu / cauchy_transform / trace_field routines
// that define the operators; the remaining blade columns follow by right
// multiplication with the basis blades, which commutes with all three
// factors. The boundary system is inverted through an SVD with Tikhonov
// filtering, so P is idempotent up to the filter bias and rounding.
class BergmanSystem {
public:
    BergmanSystem(const VoxelDomain& dom, const KernelEvaluator& kernel,
                  const BergmanOptions& opts = {});
    ~BergmanSystem();
    BergmanSystem(BergmanSystem&&) noexcept;
    BergmanSystem& operator=(BergmanSystem&&) noexcept;

    const VoxelDomain& domain() const;

    Field apply_P(const Field& f) const;
    Field apply_Q(const Field& f) const;  // Q = I - P

    // Effective condition sigma_max / max(sigma_min, lambda) of the
    // assembled boundary operator.
    double condition_estimate() const;

    // Singular values of the boundary operator, descending; diagnostic for
    // picking lambda_rel.
    std::vector<double> boundary_spectrum() const;

    // The discrete Teodorescu transforms as matrix-vector products; used by
    // the Stokes pipeline where they are applied many times.
    Field apply_teodorescu(const Field& f) const;
    Field apply_teodorescu_conj(const Field& f) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    friend struct StokesAccess;
};

// One-shot projection; assembles the dense system on every call, so prefer
// BergmanSystem when projecting repeatedly on the same domain.
Field bergman_projection(const VoxelDomain& dom, const Field& f,
                         const KernelEvaluator& kernel);

inline BergmanOptions stokes_bergman_defaults() {
    BergmanOptions b;
    // The Stokes chain pushes rough cell data (not just smooth traces)
    // through the filtered boundary inverse; the projection's 1e-10 default
    // amplifies quadrature noise there by orders of magnitude, so the
    // pipeline damps harder by default.
    b.lambda_rel = 1e-4;
    return b;
}

struct StokesOptions {
    BergmanOptions bergman = stokes_bergman_defaults();
    // Apply Q to the body force before the Teodorescu transform in the
    // pressure right-hand side (Sc(Q T_E Q F) instead of Sc(Q T_E F)).
    // The unprojected form is what the divergence constraint yields; the
    // projected one is kept for comparison.
    bool project_force = false;
    // Weight of the gradient penalty in the pressure least-squares solve,
    // min |L p - rhs|^2 + w^2 |grad_h p|^2. The scalar-part operator leaves
    // smooth near-boundary modes weakly determined; the penalty fills them
    // in by smoothness instead of letting them swing freely.
    double pressure_smoothing = 1e-3;
    // Residual reporting threshold for within_tolerance; never fatal.
    double residual_tolerance = 1e-2;
};

struct StokesResult {
    Field u;  // velocity
    Field p;  // pressure, scalar, mean zero
    // max of || -Laplace_h u + (1/eta) grad_h p - F || over cells of
    // interior depth >= 2
    double momentum_residual = 0.0;
    // max of |div_h u| over cells of interior depth >= 2
    double divergence_residual = 0.0;
    // max of ||tr u|| over facets
    double boundary_residual = 0.0;
    bool within_tolerance = false;
};

// Stationary Stokes solve -Delta u + (1/eta) D p = F, div u = 0, u = 0 on
// the boundary, via the Bergman projection:
//
//     pressure:  Sc(Q p) = eta Sc(Q T_E F)   (+ mean-zero gauge row)
//     velocity:  u = (1/eta) conj(T_E)(Q p) - conj(T_E)(Q T_E F)
//
// where conj(T_E) is the Teodorescu transform of the conjugated Dirac
// operator; the pair carries the Borel-Pompeiu factorization
// Laplace = D conj(D). Throws std::invalid_argument for eta <= 0,
// conditioning_error if the boundary system is singular.
StokesResult stokes_solve(const VoxelDomain& dom, const Field& force, double eta,
                          const KernelEvaluator& kernel,
                          const StokesOptions& opts = {});

}  // namespace cla
