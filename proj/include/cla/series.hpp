#pragma once

#include "cla/kernel_function.hpp"
#include "cla/lattice.hpp"
#include "cla/modular_group.hpp"

namespace cla {

struct SeriesResult {
    Multivector value;
    double truncation_radius = 0.0;
    double tail_bound = 0.0;
    long terms_summed = 0;
};

// Sign twist (-1)^(k_0 + ... + k_l) on the first l+1 integer lattice
// coordinates; the 2^(p+1) characters select the spinor bundle.
struct BundleCharacter {
    int l = 0;
};

struct SeriesOptions {
    // Serial compensated summation in the documented term order; otherwise
    // terms are reduced in parallel.
    bool deterministic = false;
    // Group enumeration limits for the hyperbolic families.
    int max_word_length = 12;
    double expand_slack = 4.0;
};

// Partial sum of q_m(x + omega) over |omega| <= R with a certified tail:
//   tail = K * (S_{r-1}/covol) * beta * R_eff^(r-s) / (s - r),
// the Voronoi-cell comparison integral with s = n + |m|, K the kernel
// coefficient bound, R_eff = R - 2*mu - |x_par| (mu = covering radius bound,
// x_par = projection of x onto the lattice span) and beta the shell
// correction (1 + (mu+|x_par|)/R_eff)^(r-1). R_eff <= 0 yields an infinite
// bound. Requires |m| >= rank + 1 (domain_error otherwise); throws
// pole_error when x is within 1e-9 of a translated singularity.
SeriesResult eisenstein_epsilon(const MultiIndex& m, const Lattice& lat,
                                const std::vector<double>& x, double R,
                                const SeriesOptions& opts = {});

// Sign-twisted variant; same convergence and tail bound (the character has
// modulus one).
SeriesResult eisenstein_twisted(const MultiIndex& m, const Lattice& lat,
                                const BundleCharacter& character,
                                const std::vector<double>& x, double R,
                                const SeriesOptions& opts = {});

// Cauchy kernel of the torus/cylinder R^(n+1)/Lattice: sum of
// q_0(x - y + omega). Requires rank <= n - 1 (domain_error otherwise; the
// borderline ranks need convergence-preserving corrections that are out of
// scope).
SeriesResult torus_cauchy_kernel(const Lattice& lat, const std::vector<double>& x,
                                 const std::vector<double>& y, double R,
                                 const SeriesOptions& opts = {});

// Hecke-regularized Eisenstein series at one sigma > 0: sum over coset
// representatives of the level-N translation quotient of
//   (x_n / |cx+d|^2)^sigma * q_0(cx+d).
// Representatives come from enumerating the full modular group, filtering to
// the congruence subgroup and deduplicating on the bottom row; N >= 2
// required (and N = 2 makes the sum vanish identically since -I lies in the
// level-2 subgroup). The tail bound is the empirical shell estimator
// described at the implementation; hyperbolic counting admits no clean
// comparison integral at small sigma.
SeriesResult hyperbolic_eisenstein(const Paravector& x, int p, int N, double sigma,
                                   double norm_bound, const SeriesOptions& opts = {});

// Poincare series over the full congruence subgroup:
//   (x_n / |cx+d|^2)^sigma * q_0(cx+d) * q_0(w + M<x>).
SeriesResult poincare_series(const Paravector& x, const Paravector& w, int p, int N,
                             double sigma, double norm_bound,
                             const SeriesOptions& opts = {});

// Manifold Cauchy kernel: sum over the congruence subgroup of
//   automorphy_factor(M, x) * q_0(y - M<x>).
// The orbit sum converges only for p < n - 1; larger p throws domain_error.
SeriesResult hyperbolic_cauchy_kernel(const Paravector& x, const Paravector& y, int p,
                                      int N, double norm_bound,
                                      const SeriesOptions& opts = {});

// Linear least-squares extrapolation of the sigma -> 0 limit from values at
// positive sigmas (the Hecke trick made explicit). Requires >= 2 samples.
Multivector hecke_extrapolate(const std::vector<double>& sigmas,
                              const std::vector<Multivector>& values);

}  // namespace cla
