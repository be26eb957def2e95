#include "cla/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cla/series.hpp"

namespace cla {

namespace {

double unit_sphere_area(int d) { return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d); }

Multivector flat_q0(const std::vector<double>& z, int n) {
    double nsq = 0.0;
    for (double c : z) nsq += c * c;
    if (nsq < 1e-300) throw pole_error("Cauchy kernel evaluated on the diagonal");
    const double scale = std::pow(nsq, -0.5 * (n + 1));
    Multivector out(n);
    out[0] = z[0] * scale;
    for (int i = 1; i <= n; ++i) out[1u << (i - 1)] = -z[i] * scale;
    return out;
}

}  // namespace

KernelEvaluator flat_kernel(int ambient_dim) {
    KernelEvaluator k;
    k.ambient_dim = ambient_dim;
    k.flat = true;
    const int n = ambient_dim - 1;
    const double inv_area = 1.0 / unit_sphere_area(ambient_dim);
    k.eval = [n, inv_area](const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = y[i] - x[i];
        return flat_q0(z, n) * inv_area;
    };
    return k;
}

KernelEvaluator torus_kernel(const Lattice& lat, double R) {
    KernelEvaluator k;
    k.ambient_dim = lat.ambient_dim();
    const double inv_area = 1.0 / unit_sphere_area(lat.ambient_dim());
    // torus_cauchy_kernel(lat, a, b, R) sums q_0(a - b + omega); C(x, y)
    // needs q_0(y - x + omega)
    k.eval = [lat, R, inv_area](const std::vector<double>& x,
                                const std::vector<double>& y) {
        SeriesOptions opts;
        opts.deterministic = true;
        return torus_cauchy_kernel(lat, y, x, R, opts).value * inv_area;
    };
    return k;
}

namespace {

// Subdivision admissibility diam^2 <= theta^2 dist^2 and recursion cap shared
// by all transforms. theta shrinks with h so quadrature error keeps pace with
// the grid instead of plateauing.
constexpr int kMaxQuadDepth = 8;
double quad_theta_sq(double h) { return std::min(0.25, 1.2 * h); }

double dist_sq(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Tensor two-point Gauss rule for the product C(x, .) * data(.) over the
// nonzero extents of a box element.
template <class DataF>
Multivector gauss_leaf(const KernelEvaluator& k, const std::vector<double>& x,
                       const std::vector<double>& center,
                       const std::vector<double>& half, const DataF& data) {
    constexpr double kGaussOffset = 0.57735026918962576;  // 1/sqrt(3)
    std::vector<int> axes;
    double volume = 1.0;
    for (std::size_t i = 0; i < half.size(); ++i)
        if (half[i] > 0.0) {
            axes.push_back(static_cast<int>(i));
            volume *= 2.0 * half[i];
        }
    Multivector acc(k.ambient_dim - 1);
    std::vector<int> sign(axes.size(), 0);
    while (true) {
        std::vector<double> node = center;
        for (std::size_t i = 0; i < axes.size(); ++i)
            node[static_cast<std::size_t>(axes[i])] +=
                (sign[i] == 0 ? -kGaussOffset : kGaussOffset) *
                half[static_cast<std::size_t>(axes[i])];
        acc += k.eval(x, node) * data(node);
        std::size_t i = 0;
        while (i < sign.size() && sign[i] == 1) sign[i++] = 0;
        if (i == sign.size()) break;
        sign[i] = 1;
    }
    return acc * (volume / static_cast<double>(1u << axes.size()));
}

// Gauss quadrature with adaptive dyadic subdivision: elements are split while
// their diameter exceeds theta * distance to the target, so the per-leaf
// relative error stays bounded as the element approaches x. Far elements
// pass the criterion at depth 0 and cost a single leaf rule. half[i] is the
// element half-width along axis i (zero along a facet's normal axis).
template <class DataF>
Multivector integrate_element(const KernelEvaluator& k, const std::vector<double>& x,
                              const std::vector<double>& center,
                              const std::vector<double>& half, double theta_sq,
                              int depth, const DataF& data) {
    double diam_sq = 0.0;
    for (double hw : half) diam_sq += 4.0 * hw * hw;
    if (depth >= kMaxQuadDepth || diam_sq <= theta_sq * dist_sq(x, center))
        return gauss_leaf(k, x, center, half, data);

    std::vector<int> axes;
    for (std::size_t i = 0; i < half.size(); ++i)
        if (half[i] > 0.0) axes.push_back(static_cast<int>(i));
    Multivector acc(k.ambient_dim - 1);
    std::vector<double> child_half = half;
    for (int a : axes) child_half[static_cast<std::size_t>(a)] *= 0.5;
    std::vector<int> sign(axes.size(), 0);
    while (true) {
        std::vector<double> child_center = center;
        for (std::size_t i = 0; i < axes.size(); ++i)
            child_center[static_cast<std::size_t>(axes[i])] +=
                (sign[i] == 0 ? -1.0 : 1.0) * child_half[static_cast<std::size_t>(axes[i])];
        acc += integrate_element(k, x, child_center, child_half, theta_sq, depth + 1, data);
        std::size_t i = 0;
        while (i < sign.size() && sign[i] == 1) sign[i++] = 0;
        if (i == sign.size()) break;
        sign[i] = 1;
    }
    return acc;
}

KernelEvaluator maybe_conjugated(const KernelEvaluator& k, bool conjugate) {
    if (!conjugate) return k;
    KernelEvaluator kk;
    kk.ambient_dim = k.ambient_dim;
    kk.eval = [e = k.eval](const std::vector<double>& a, const std::vector<double>& b) {
        return grade_involution(e(a, b));
    };
    return kk;
}

template <bool Conjugate>
Field teodorescu_impl(const VoxelDomain& dom, const Field& f,
                      const KernelEvaluator& k) {
    Field out = zero_field(dom);
    const double hh = dom.h();
    const double theta_sq = quad_theta_sq(hh);
    const int d = dom.ambient_dim();
    const long nc = dom.cell_count();
    const KernelEvaluator kk = maybe_conjugated(k, Conjugate);
    // Per-cell linear source model f_j + sum_a (d_a f)_j (y_a - c_a): keeps
    // the panel data error at O(h^2). Cells where the value and every slope
    // vanish are skipped, so delta inputs still cost O(cells).
    std::vector<Field> df;
    df.reserve(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) df.push_back(partial_fd_field(f, a));
    std::vector<long> sources;
    sources.reserve(static_cast<std::size_t>(nc));
    for (long j = 0; j < nc; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        bool live = !f.values[jj].is_zero();
        for (int a = 0; a < d && !live; ++a)
            live = !df[static_cast<std::size_t>(a)].values[jj].is_zero();
        if (live) sources.push_back(j);
    }
    std::vector<std::vector<double>> centers(static_cast<std::size_t>(nc));
    for (long i = 0; i < nc; ++i) centers[static_cast<std::size_t>(i)] = dom.cell_center(i);
    const std::vector<double> cell_half(static_cast<std::size_t>(d), 0.5 * hh);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < nc; ++i) {
        const auto& x = centers[static_cast<std::size_t>(i)];
        Multivector acc(dom.clifford_dim());
        for (long j : sources) {
            // self-cell: the constant part integrates to exactly zero (every
            // q_0 component is odd); the slope moment it drops is O(h^2)
            if (j == i) continue;
            const auto jj = static_cast<std::size_t>(j);
            const auto& y = centers[jj];
            const auto data = [&](const std::vector<double>& node) {
                Multivector g = f.values[jj];
                for (int a = 0; a < d; ++a) {
                    const auto aa = static_cast<std::size_t>(a);
                    g += df[aa].values[jj] * (node[aa] - y[aa]);
                }
                return g;
            };
            acc += integrate_element(kk, x, y, cell_half, theta_sq, 0, data);
        }
        out.values[static_cast<std::size_t>(i)] = -acc;
    }
    return out;
}

template <bool Conjugate>
Field cauchy_impl(const VoxelDomain& dom, const BoundaryTrace& g,
                  const KernelEvaluator& k) {
    Field out = zero_field(dom);
    const auto& facets = dom.facets();
    const double hh = dom.h();
    const double theta_sq = quad_theta_sq(hh);
    const int d = dom.ambient_dim();
    const long nc = dom.cell_count();
    const KernelEvaluator kk = maybe_conjugated(k, Conjugate);

    // Per-facet quadratic trace model along the tangent axes: slopes and
    // axis curvatures from neighboring facets in the same face plane,
    // one-sided at face edges.
    const auto fkey = [d](long cell, int axis, int orient) {
        return (static_cast<long long>(cell) * d + axis) * 2 + (orient > 0 ? 1 : 0);
    };
    std::unordered_map<long long, std::size_t> facet_at;
    facet_at.reserve(facets.size() * 2);
    for (std::size_t fi = 0; fi < facets.size(); ++fi)
        facet_at.emplace(fkey(facets[fi].cell, facets[fi].axis, facets[fi].orientation), fi);
    const auto tangent_neighbor = [&](std::size_t fi, int axis, int step) -> long {
        std::vector<long> coord = dom.cells()[static_cast<std::size_t>(facets[fi].cell)];
        coord[static_cast<std::size_t>(axis)] += step;
        const long cell = dom.cell_index(coord);
        if (cell < 0) return -1;
        const auto it = facet_at.find(fkey(cell, facets[fi].axis, facets[fi].orientation));
        return it == facet_at.end() ? -1 : static_cast<long>(it->second);
    };
    const Multivector mv_zero(dom.clifford_dim());
    std::vector<std::vector<Multivector>> slope(
        facets.size(), std::vector<Multivector>(static_cast<std::size_t>(d), mv_zero));
    std::vector<std::vector<Multivector>> curv(
        facets.size(), std::vector<Multivector>(static_cast<std::size_t>(d), mv_zero));
    for (std::size_t fi = 0; fi < facets.size(); ++fi)
        for (int a = 0; a < d; ++a) {
            if (a == facets[fi].axis) continue;
            const auto aa = static_cast<std::size_t>(a);
            const auto at = [&](long idx) -> const Multivector& {
                return g.values[static_cast<std::size_t>(idx)];
            };
            const long p = tangent_neighbor(fi, a, +1);
            const long m = tangent_neighbor(fi, a, -1);
            const double ih = 1.0 / hh, ih2 = ih * ih;
            if (p >= 0 && m >= 0) {
                slope[fi][aa] = (at(p) - at(m)) * (0.5 * ih);
                curv[fi][aa] = (at(p) - g.values[fi] * 2.0 + at(m)) * ih2;
            } else if (p >= 0) {
                const long p2 = tangent_neighbor(fi, a, +2);
                if (p2 >= 0) {
                    slope[fi][aa] =
                        (g.values[fi] * -3.0 + at(p) * 4.0 - at(p2)) * (0.5 * ih);
                    curv[fi][aa] = (g.values[fi] - at(p) * 2.0 + at(p2)) * ih2;
                } else {
                    slope[fi][aa] = (at(p) - g.values[fi]) * ih;
                }
            } else if (m >= 0) {
                const long m2 = tangent_neighbor(fi, a, -2);
                if (m2 >= 0) {
                    slope[fi][aa] =
                        (g.values[fi] * 3.0 - at(m) * 4.0 + at(m2)) * (0.5 * ih);
                    curv[fi][aa] = (g.values[fi] - at(m) * 2.0 + at(m2)) * ih2;
                } else {
                    slope[fi][aa] = (g.values[fi] - at(m)) * ih;
                }
            }
        }

    std::vector<std::vector<double>> facet_half(
        facets.size(),
        std::vector<double>(static_cast<std::size_t>(d), 0.5 * hh));
    for (std::size_t fi = 0; fi < facets.size(); ++fi)
        facet_half[fi][static_cast<std::size_t>(facets[fi].axis)] = 0.0;

    // Facets whose value, slopes and curvatures all vanish contribute
    // nothing; skipping them keeps delta traces O(facets).
    std::vector<std::size_t> live_facets;
    live_facets.reserve(facets.size());
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
        bool live = !g.values[fi].is_zero();
        for (int a = 0; a < d && !live; ++a) {
            const auto aa = static_cast<std::size_t>(a);
            live = !slope[fi][aa].is_zero() || !curv[fi][aa].is_zero();
        }
        if (live) live_facets.push_back(fi);
    }

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < nc; ++i) {
        const std::vector<double> x = dom.cell_center(i);
        Multivector acc(dom.clifford_dim());
        for (const std::size_t fi : live_facets) {
            Multivector n = facets[fi].normal;
            if constexpr (Conjugate) n = grade_involution(n);
            const auto& y = facets[fi].center;
            const auto data = [&](const std::vector<double>& node) {
                Multivector t = g.values[fi];
                for (int a = 0; a < d; ++a) {
                    if (a == facets[fi].axis) continue;
                    const auto aa = static_cast<std::size_t>(a);
                    const double dz = node[aa] - y[aa];
                    t += slope[fi][aa] * dz + curv[fi][aa] * (0.5 * dz * dz);
                }
                return n * t;
            };
            acc += integrate_element(kk, x, y, facet_half[fi], theta_sq, 0, data);
        }
        out.values[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return out;
}

// Allocation-free flat-kernel path. Mirrors the generic implementation
// exactly (same panels, nodes, and linear data models) on fixed-capacity
// stack buffers; used whenever the kernel is flat and the ambient dimension
// fits the buffers.
constexpr int kFastMaxAmbient = 6;  // Clifford dim <= 5, 32 blades
constexpr int kFastBlades = 32;

struct FastCtx {
    int d = 0, n = 0, m = 0;
    double inv_area = 1.0;
    // sign of e_i * e_B for vector index i = 1..n; target blade is bit ^ B
    int sgn[kFastMaxAmbient][kFastBlades] = {};
};

FastCtx make_fast_ctx(int ambient_dim) {
    FastCtx ctx;
    ctx.d = ambient_dim;
    ctx.n = ambient_dim - 1;
    ctx.m = 1 << ctx.n;
    ctx.inv_area = 1.0 / unit_sphere_area(ambient_dim);
    for (int i = 1; i <= ctx.n; ++i)
        for (int b = 0; b < ctx.m; ++b)
            ctx.sgn[i][b] = blade_product_sign(1u << (i - 1),
                                               static_cast<std::uint32_t>(b));
    return ctx;
}

// c[0..n] = paravector coordinates of C(x, node) (conjugated when asked)
template <bool Conjugate>
void flat_kernel_raw(const FastCtx& ctx, const double* x, const double* node,
                     double* c) {
    double nsq = 0.0, z[kFastMaxAmbient];
    for (int i = 0; i < ctx.d; ++i) {
        z[i] = node[i] - x[i];
        nsq += z[i] * z[i];
    }
    if (nsq < 1e-300) throw pole_error("Cauchy kernel evaluated on the diagonal");
    double scale;
    switch (ctx.d) {
        case 2: scale = 1.0 / nsq; break;
        case 3: scale = 1.0 / (nsq * std::sqrt(nsq)); break;
        case 4: scale = 1.0 / (nsq * nsq); break;
        default: scale = std::pow(nsq, -0.5 * ctx.d); break;
    }
    scale *= ctx.inv_area;
    c[0] = z[0] * scale;
    const double vec_sign = Conjugate ? 1.0 : -1.0;  // alpha flips grade 1
    for (int i = 1; i <= ctx.n; ++i) c[i] = vec_sign * z[i] * scale;
}

// acc += (c[0] + sum_i c[i] e_i) * t
inline void accum_paravector_times(const FastCtx& ctx, const double* c,
                                   const double* t, double* acc) {
    for (int b = 0; b < ctx.m; ++b) acc[b] += c[0] * t[b];
    for (int i = 1; i <= ctx.n; ++i) {
        if (c[i] == 0.0) continue;
        const unsigned bit = 1u << (i - 1);
        for (int b = 0; b < ctx.m; ++b)
            acc[static_cast<int>(bit ^ static_cast<unsigned>(b))] +=
                c[i] * ctx.sgn[i][b] * t[b];
    }
}

// Recursive panel integration matching integrate_element: data fills the
// blade coefficients of the integrand factor at a node.
template <bool Conjugate, class DataRaw>
void integrate_raw(const FastCtx& ctx, const double* x, const double* center,
                   const double* half, double theta_sq, int depth,
                   const DataRaw& data, double* acc) {
    double diam_sq = 0.0, dsq = 0.0;
    for (int i = 0; i < ctx.d; ++i) {
        diam_sq += 4.0 * half[i] * half[i];
        const double dz = x[i] - center[i];
        dsq += dz * dz;
    }
    int axes[kFastMaxAmbient], na = 0;
    double volume = 1.0;
    for (int i = 0; i < ctx.d; ++i)
        if (half[i] > 0.0) {
            axes[na++] = i;
            volume *= 2.0 * half[i];
        }
    if (depth >= kMaxQuadDepth || diam_sq <= theta_sq * dsq) {
        constexpr double kGaussOffset = 0.57735026918962576;  // 1/sqrt(3)
        double lacc[kFastBlades] = {}, node[kFastMaxAmbient], c[kFastMaxAmbient],
               t[kFastBlades];
        const unsigned combos = 1u << na;
        for (unsigned s = 0; s < combos; ++s) {
            for (int i = 0; i < ctx.d; ++i) node[i] = center[i];
            for (int i = 0; i < na; ++i)
                node[axes[i]] +=
                    ((s >> i) & 1u ? kGaussOffset : -kGaussOffset) * half[axes[i]];
            flat_kernel_raw<Conjugate>(ctx, x, node, c);
            data(node, t);
            accum_paravector_times(ctx, c, t, lacc);
        }
        const double w = volume / static_cast<double>(combos);
        for (int b = 0; b < ctx.m; ++b) acc[b] += w * lacc[b];
        return;
    }
    double child_center[kFastMaxAmbient], child_half[kFastMaxAmbient];
    for (int i = 0; i < ctx.d; ++i) child_half[i] = half[i];
    for (int i = 0; i < na; ++i) child_half[axes[i]] *= 0.5;
    const unsigned children = 1u << na;
    for (unsigned s = 0; s < children; ++s) {
        for (int i = 0; i < ctx.d; ++i) child_center[i] = center[i];
        for (int i = 0; i < na; ++i)
            child_center[axes[i]] +=
                ((s >> i) & 1u ? 1.0 : -1.0) * child_half[axes[i]];
        integrate_raw<Conjugate>(ctx, x, child_center, child_half, theta_sq,
                                 depth + 1, data, acc);
    }
}

template <bool Conjugate>
Field teodorescu_fast(const VoxelDomain& dom, const Field& f) {
    Field out = zero_field(dom);
    const double hh = dom.h();
    const double theta_sq = quad_theta_sq(hh);
    const int d = dom.ambient_dim();
    const long nc = dom.cell_count();
    const FastCtx ctx = make_fast_ctx(d);
    const int m = ctx.m;

    std::vector<double> fv(static_cast<std::size_t>(nc) * m);
    std::vector<double> dfv(static_cast<std::size_t>(d) * nc * m);
    for (long j = 0; j < nc; ++j)
        for (int b = 0; b < m; ++b)
            fv[static_cast<std::size_t>(j) * m + b] =
                f.values[static_cast<std::size_t>(j)][static_cast<std::uint32_t>(b)];
    for (int a = 0; a < d; ++a) {
        const Field da = partial_fd_field(f, a);
        for (long j = 0; j < nc; ++j)
            for (int b = 0; b < m; ++b)
                dfv[(static_cast<std::size_t>(a) * nc + j) * m + b] =
                    da.values[static_cast<std::size_t>(j)][static_cast<std::uint32_t>(b)];
    }
    std::vector<long> sources;
    sources.reserve(static_cast<std::size_t>(nc));
    for (long j = 0; j < nc; ++j) {
        bool live = false;
        for (int b = 0; b < m && !live; ++b)
            live = fv[static_cast<std::size_t>(j) * m + b] != 0.0;
        for (int a = 0; a < d && !live; ++a)
            for (int b = 0; b < m && !live; ++b)
                live = dfv[(static_cast<std::size_t>(a) * nc + j) * m + b] != 0.0;
        if (live) sources.push_back(j);
    }
    std::vector<double> centers(static_cast<std::size_t>(nc) * d);
    for (long i = 0; i < nc; ++i) {
        const std::vector<double> c = dom.cell_center(i);
        for (int a = 0; a < d; ++a) centers[static_cast<std::size_t>(i) * d + a] = c[static_cast<std::size_t>(a)];
    }
    double cell_half[kFastMaxAmbient];
    for (int a = 0; a < d; ++a) cell_half[a] = 0.5 * hh;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < nc; ++i) {
        const double* x = &centers[static_cast<std::size_t>(i) * d];
        double acc[kFastBlades] = {};
        for (long j : sources) {
            // self-cell: the constant part integrates to exactly zero (every
            // q_0 component is odd); the slope moment it drops is O(h^2)
            if (j == i) continue;
            const double* y = &centers[static_cast<std::size_t>(j) * d];
            const double* fj = &fv[static_cast<std::size_t>(j) * m];
            const auto data = [&](const double* node, double* t) {
                for (int b = 0; b < m; ++b) t[b] = fj[b];
                for (int a = 0; a < d; ++a) {
                    const double dz = node[a] - y[a];
                    if (dz == 0.0) continue;
                    const double* dfa = &dfv[(static_cast<std::size_t>(a) * nc + j) * m];
                    for (int b = 0; b < m; ++b) t[b] += dfa[b] * dz;
                }
            };
            integrate_raw<Conjugate>(ctx, x, y, cell_half, theta_sq, 0, data, acc);
        }
        Multivector& o = out.values[static_cast<std::size_t>(i)];
        for (int b = 0; b < m; ++b) o[static_cast<std::uint32_t>(b)] = -acc[b];
    }
    return out;
}

template <bool Conjugate>
Field cauchy_fast(const VoxelDomain& dom, const BoundaryTrace& g) {
    Field out = zero_field(dom);
    const auto& facets = dom.facets();
    const std::size_t nf = facets.size();
    const double hh = dom.h();
    const double theta_sq = quad_theta_sq(hh);
    const int d = dom.ambient_dim();
    const long nc = dom.cell_count();
    const FastCtx ctx = make_fast_ctx(d);
    const int m = ctx.m;

    // facet adjacency and tangent slopes, as in the generic path
    const auto fkey = [d](long cell, int axis, int orient) {
        return (static_cast<long long>(cell) * d + axis) * 2 + (orient > 0 ? 1 : 0);
    };
    std::unordered_map<long long, std::size_t> facet_at;
    facet_at.reserve(nf * 2);
    for (std::size_t fi = 0; fi < nf; ++fi)
        facet_at.emplace(fkey(facets[fi].cell, facets[fi].axis, facets[fi].orientation), fi);
    const auto tangent_neighbor = [&](std::size_t fi, int axis, int step) -> long {
        std::vector<long> coord = dom.cells()[static_cast<std::size_t>(facets[fi].cell)];
        coord[static_cast<std::size_t>(axis)] += step;
        const long cell = dom.cell_index(coord);
        if (cell < 0) return -1;
        const auto it = facet_at.find(fkey(cell, facets[fi].axis, facets[fi].orientation));
        return it == facet_at.end() ? -1 : static_cast<long>(it->second);
    };
    std::vector<double> gv(nf * m), sv(nf * d * m, 0.0), cv(nf * d * m, 0.0);
    for (std::size_t fi = 0; fi < nf; ++fi)
        for (int b = 0; b < m; ++b)
            gv[fi * m + b] = g.values[fi][static_cast<std::uint32_t>(b)];
    for (std::size_t fi = 0; fi < nf; ++fi)
        for (int a = 0; a < d; ++a) {
            if (a == facets[fi].axis) continue;
            const long p = tangent_neighbor(fi, a, +1);
            const long mn = tangent_neighbor(fi, a, -1);
            double* s = &sv[(fi * d + static_cast<std::size_t>(a)) * m];
            double* c2 = &cv[(fi * d + static_cast<std::size_t>(a)) * m];
            const double ih = 1.0 / hh, ih2 = ih * ih;
            const auto at = [&](long idx) { return &gv[static_cast<std::size_t>(idx) * m]; };
            const double* g0 = &gv[fi * m];
            if (p >= 0 && mn >= 0) {
                const double *gp = at(p), *gm = at(mn);
                for (int b = 0; b < m; ++b) {
                    s[b] = (gp[b] - gm[b]) * (0.5 * ih);
                    c2[b] = (gp[b] - 2.0 * g0[b] + gm[b]) * ih2;
                }
            } else if (p >= 0) {
                const long p2 = tangent_neighbor(fi, a, +2);
                const double* gp = at(p);
                if (p2 >= 0) {
                    const double* gp2 = at(p2);
                    for (int b = 0; b < m; ++b) {
                        s[b] = (-3.0 * g0[b] + 4.0 * gp[b] - gp2[b]) * (0.5 * ih);
                        c2[b] = (g0[b] - 2.0 * gp[b] + gp2[b]) * ih2;
                    }
                } else {
                    for (int b = 0; b < m; ++b) s[b] = (gp[b] - g0[b]) * ih;
                }
            } else if (mn >= 0) {
                const long m2 = tangent_neighbor(fi, a, -2);
                const double* gm = at(mn);
                if (m2 >= 0) {
                    const double* gm2 = at(m2);
                    for (int b = 0; b < m; ++b) {
                        s[b] = (3.0 * g0[b] - 4.0 * gm[b] + gm2[b]) * (0.5 * ih);
                        c2[b] = (g0[b] - 2.0 * gm[b] + gm2[b]) * ih2;
                    }
                } else {
                    for (int b = 0; b < m; ++b) s[b] = (g0[b] - gm[b]) * ih;
                }
            }
        }

    std::vector<double> fcenters(nf * d), fhalf(nf * d);
    for (std::size_t fi = 0; fi < nf; ++fi)
        for (int a = 0; a < d; ++a) {
            fcenters[fi * d + static_cast<std::size_t>(a)] =
                facets[fi].center[static_cast<std::size_t>(a)];
            fhalf[fi * d + static_cast<std::size_t>(a)] =
                a == facets[fi].axis ? 0.0 : 0.5 * hh;
        }
    std::vector<double> centers(static_cast<std::size_t>(nc) * d);
    for (long i = 0; i < nc; ++i) {
        const std::vector<double> c = dom.cell_center(i);
        for (int a = 0; a < d; ++a) centers[static_cast<std::size_t>(i) * d + a] = c[static_cast<std::size_t>(a)];
    }
    // skip facets with identically zero data, as in the generic path
    std::vector<std::size_t> live_facets;
    live_facets.reserve(nf);
    for (std::size_t fi = 0; fi < nf; ++fi) {
        bool live = false;
        for (int b = 0; b < m && !live; ++b) live = gv[fi * m + b] != 0.0;
        for (std::size_t a = 0; a < static_cast<std::size_t>(d) && !live; ++a)
            for (int b = 0; b < m && !live; ++b)
                live = sv[(fi * d + a) * m + b] != 0.0 ||
                       cv[(fi * d + a) * m + b] != 0.0;
        if (live) live_facets.push_back(fi);
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < nc; ++i) {
        const double* x = &centers[static_cast<std::size_t>(i) * d];
        double acc[kFastBlades] = {};
        for (const std::size_t fi : live_facets) {
            const int naxis = facets[fi].axis;
            // alpha fixes the scalar normal and flips the grade-1 ones
            const double nsign =
                static_cast<double>(facets[fi].orientation) *
                (Conjugate && naxis != 0 ? -1.0 : 1.0);
            const double* y = &fcenters[fi * d];
            const auto data = [&](const double* node, double* t) {
                double lin[kFastBlades];
                for (int b = 0; b < m; ++b) lin[b] = gv[fi * m + b];
                for (int a = 0; a < d; ++a) {
                    if (a == naxis) continue;
                    const double dz = node[a] - y[a];
                    if (dz == 0.0) continue;
                    const double* s = &sv[(fi * d + static_cast<std::size_t>(a)) * m];
                    const double* c2 = &cv[(fi * d + static_cast<std::size_t>(a)) * m];
                    const double hz = 0.5 * dz * dz;
                    for (int b = 0; b < m; ++b) lin[b] += s[b] * dz + c2[b] * hz;
                }
                if (naxis == 0) {
                    for (int b = 0; b < m; ++b) t[b] = nsign * lin[b];
                } else {
                    const unsigned bit = 1u << (naxis - 1);
                    for (int b = 0; b < m; ++b)
                        t[static_cast<int>(bit ^ static_cast<unsigned>(b))] =
                            nsign * ctx.sgn[naxis][b] * lin[b];
                }
            };
            integrate_raw<Conjugate>(ctx, x, &fcenters[fi * d], &fhalf[fi * d],
                                     theta_sq, 0, data, acc);
        }
        Multivector& o = out.values[static_cast<std::size_t>(i)];
        for (int b = 0; b < m; ++b) o[static_cast<std::uint32_t>(b)] = acc[b];
    }
    return out;
}

}  // namespace

Field teodorescu(const VoxelDomain& dom, const Field& f, const KernelEvaluator& k) {
    if (k.flat && dom.ambient_dim() <= kFastMaxAmbient)
        return teodorescu_fast<false>(dom, f);
    return teodorescu_impl<false>(dom, f, k);
}

Field teodorescu_conj(const VoxelDomain& dom, const Field& f,
                      const KernelEvaluator& k) {
    if (k.flat && dom.ambient_dim() <= kFastMaxAmbient)
        return teodorescu_fast<true>(dom, f);
    return teodorescu_impl<true>(dom, f, k);
}

Field cauchy_transform(const VoxelDomain& dom, const BoundaryTrace& g,
                       const KernelEvaluator& k) {
    if (k.flat && dom.ambient_dim() <= kFastMaxAmbient)
        return cauchy_fast<false>(dom, g);
    return cauchy_impl<false>(dom, g, k);
}

Field cauchy_transform_conj(const VoxelDomain& dom, const BoundaryTrace& g,
                            const KernelEvaluator& k) {
    if (k.flat && dom.ambient_dim() <= kFastMaxAmbient)
        return cauchy_fast<true>(dom, g);
    return cauchy_impl<true>(dom, g, k);
}

double borel_pompeiu_residual(const VoxelDomain& dom, const Field& f,
                              const KernelEvaluator& k) {
    Field rep = cauchy_transform(dom, trace_field(f), k);
    Field vol = teodorescu(dom, dirac_fd_field(f, DiracVariant::CauchyRiemann), k);
    Field diff = zero_field(dom);
    for (long i = 0; i < dom.cell_count(); ++i) {
        const auto ii = static_cast<std::size_t>(i);
        diff.values[ii] = rep.values[ii] + vol.values[ii] - f.values[ii];
    }
    return field_max_norm_interior(diff, 2);
}

}  // namespace cla
