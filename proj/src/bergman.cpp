#include "cla/bergman.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cla {

namespace {

Eigen::VectorXd field_to_vec(const Field& f, int m) {
    Eigen::VectorXd v(static_cast<long>(f.values.size()) * m);
    for (std::size_t j = 0; j < f.values.size(); ++j)
        for (int b = 0; b < m; ++b)
            v[static_cast<long>(j) * m + b] =
                f.values[j][static_cast<std::uint32_t>(b)];
    return v;
}

Field vec_to_field(const VoxelDomain& dom, const Eigen::VectorXd& v, int m,
                   bool scalar = false) {
    Field f = zero_field(dom, scalar);
    for (std::size_t j = 0; j < f.values.size(); ++j)
        for (int b = 0; b < m; ++b)
            f.values[j][static_cast<std::uint32_t>(b)] =
                v[static_cast<long>(j) * m + b];
    return f;
}

// Extends columns taken on scalar-blade deltas to the full blade basis.
// All three operator factors multiply their argument from the left, so the
// column for input blade e_b is the scalar column right-multiplied by e_b:
// (x e_b)[c ^ b] = sign(c, b) x[c].
Eigen::MatrixXd expand_blades(const Eigen::MatrixXd& base, int m) {
    const long rows = base.rows();
    const long units = base.cols();
    const long cells = rows / m;
    Eigen::MatrixXd out(rows, units * m);
    std::vector<int> dst(static_cast<std::size_t>(m));
    std::vector<double> sgn(static_cast<std::size_t>(m));
    for (int b = 0; b < m; ++b) {
        for (int c = 0; c < m; ++c) {
            dst[static_cast<std::size_t>(c)] = c ^ b;
            sgn[static_cast<std::size_t>(c)] = blade_product_sign(
                static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(b));
        }
        for (long k = 0; k < units; ++k) {
            auto col = out.col(k * m + b);
            for (long i = 0; i < cells; ++i)
                for (int c = 0; c < m; ++c)
                    col[i * m + dst[static_cast<std::size_t>(c)]] =
                        sgn[static_cast<std::size_t>(c)] * base(i * m + c, k);
        }
    }
    return out;
}

}  // namespace

struct BergmanSystem::Impl {
    const VoxelDomain* dom = nullptr;
    KernelEvaluator kernel;
    BergmanOptions opts;
    int n = 0, m = 0;
    long nc = 0, nf = 0, N = 0, M = 0;

    Eigen::MatrixXd TE;              // discrete T_E, N x N
    Eigen::MatrixXd TEC;             // discrete conjugated T_E, N x N
    Eigen::MatrixXd FG;              // discrete F_Gamma, N x M
    Eigen::SparseMatrix<double> TR;  // discrete trace, M x N
    Eigen::MatrixXd W;               // TR * TEC, M x N
    Eigen::MatrixXd U, V;            // SVD of B = W * FG
    Eigen::VectorXd sing;
    double lambda = 0.0;
    double cond = 0.0;

    // Tikhonov-filtered least squares for the boundary system B g = t.
    Eigen::VectorXd boundary_solve(const Eigen::VectorXd& t) const {
        Eigen::VectorXd c = U.transpose() * t;
        for (long i = 0; i < c.size(); ++i)
            c[i] *= sing[i] / (sing[i] * sing[i] + lambda * lambda);
        return V * c;
    }
    Eigen::MatrixXd boundary_solve(const Eigen::MatrixXd& t) const {
        Eigen::MatrixXd c = U.transpose() * t;
        for (long i = 0; i < c.rows(); ++i)
            c.row(i) *= sing[i] / (sing[i] * sing[i] + lambda * lambda);
        return V * c;
    }

    Eigen::VectorXd project(const Eigen::VectorXd& v) const {
        return FG * boundary_solve(Eigen::VectorXd(W * v));
    }
};

BergmanSystem::BergmanSystem(const VoxelDomain& dom, const KernelEvaluator& kernel,
                             const BergmanOptions& opts)
    : impl_(std::make_unique<Impl>()) {
    if (kernel.ambient_dim != dom.ambient_dim())
        throw std::invalid_argument("BergmanSystem: kernel/domain dimension mismatch");
    if (dom.facets().empty())
        throw std::invalid_argument("BergmanSystem: domain has no boundary facets");
    Impl& im = *impl_;
    im.dom = &dom;
    im.kernel = kernel;
    im.opts = opts;
    im.n = dom.clifford_dim();
    im.m = 1 << im.n;
    im.nc = dom.cell_count();
    im.nf = static_cast<long>(dom.facets().size());
    im.N = im.nc * im.m;
    im.M = im.nf * im.m;

    // T_E columns from scalar cell deltas, for both Dirac variants. The
    // transforms skip cells and facets with identically zero data, so each
    // pass touches only the delta's finite-difference neighborhood.
    Eigen::MatrixXd te0(im.N, im.nc);
    Eigen::MatrixXd tec0(im.N, im.nc);
    Field delta = zero_field(dom);
    for (long j = 0; j < im.nc; ++j) {
        delta.values[static_cast<std::size_t>(j)][0] = 1.0;
        te0.col(j) = field_to_vec(teodorescu(dom, delta, kernel), im.m);
        tec0.col(j) = field_to_vec(teodorescu_conj(dom, delta, kernel), im.m);
        delta.values[static_cast<std::size_t>(j)][0] = 0.0;
    }
    im.TE = expand_blades(te0, im.m);
    im.TEC = expand_blades(tec0, im.m);
    te0.resize(0, 0);
    tec0.resize(0, 0);

    // F_Gamma columns from scalar facet deltas.
    Eigen::MatrixXd fg0(im.N, im.nf);
    BoundaryTrace dtr;
    dtr.domain = &dom;
    dtr.values.assign(static_cast<std::size_t>(im.nf), Multivector(im.n));
    for (long fi = 0; fi < im.nf; ++fi) {
        dtr.values[static_cast<std::size_t>(fi)][0] = 1.0;
        fg0.col(fi) = field_to_vec(cauchy_transform(dom, dtr, kernel), im.m);
        dtr.values[static_cast<std::size_t>(fi)][0] = 0.0;
    }
    im.FG = expand_blades(fg0, im.m);
    fg0.resize(0, 0);

    // Trace rows from scalar cell deltas; the extrapolation acts blade by
    // blade with the same weights, so the matrix is blade-diagonal.
    std::vector<Eigen::Triplet<double>> trip;
    for (long j = 0; j < im.nc; ++j) {
        delta.values[static_cast<std::size_t>(j)][0] = 1.0;
        const BoundaryTrace t = trace_field(delta);
        for (long fi = 0; fi < im.nf; ++fi) {
            const double v = t.values[static_cast<std::size_t>(fi)][0];
            if (v != 0.0)
                for (int b = 0; b < im.m; ++b)
                    trip.emplace_back(fi * im.m + b, j * im.m + b, v);
        }
        delta.values[static_cast<std::size_t>(j)][0] = 0.0;
    }
    im.TR.resize(im.M, im.N);
    im.TR.setFromTriplets(trip.begin(), trip.end());

    // The trace side pairs with the conjugated transform: with
    // Laplace = D conj(D), the projection built from tr conj(T_E) annihilates
    // conj(D)-images of zero-trace fields (conj(T_E)(conj(D) v) = v by
    // Borel-Pompeiu), which is what the Stokes chain eliminates, while
    // F_Gamma images are still reproduced exactly. With a self-adjoint Dirac
    // operator the two transforms coincide and this reduces to the usual
    // tr T_E F_Gamma pairing.
    im.W = im.TR * im.TEC;
    const Eigen::MatrixXd B = im.W * im.FG;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    im.U = svd.matrixU();
    im.V = svd.matrixV();
    im.sing = svd.singularValues();
    const double smax = im.sing.size() ? im.sing[0] : 0.0;
    const double smin = im.sing.size() ? im.sing[im.sing.size() - 1] : 0.0;
    im.lambda = opts.lambda_rel * smax;
    // The boundary operator is rank deficient by nature (boundary data whose
    // Cauchy transform vanishes inside the domain), so the raw sigma ratio is
    // meaningless; what matters is the conditioning left after the Tikhonov
    // filter floors the spectrum at lambda.
    im.cond = smax > 0.0 ? smax / std::max(smin, im.lambda)
                         : std::numeric_limits<double>::infinity();
    if (!std::isfinite(im.cond) || im.cond > opts.condition_limit)
        throw conditioning_error(
            "Bergman boundary system singular beyond regularization "
            "(condition estimate " + std::to_string(im.cond) + ")",
            im.cond);
}

BergmanSystem::~BergmanSystem() = default;
BergmanSystem::BergmanSystem(BergmanSystem&&) noexcept = default;
BergmanSystem& BergmanSystem::operator=(BergmanSystem&&) noexcept = default;

const VoxelDomain& BergmanSystem::domain() const { return *impl_->dom; }

double BergmanSystem::condition_estimate() const { return impl_->cond; }

std::vector<double> BergmanSystem::boundary_spectrum() const {
    const Eigen::VectorXd& s = impl_->sing;
    return std::vector<double>(s.data(), s.data() + s.size());
}

Field BergmanSystem::apply_P(const Field& f) const {
    const Impl& im = *impl_;
    if (f.domain != im.dom)
        throw std::invalid_argument("apply_P: field from a different domain");
    return vec_to_field(*im.dom, im.project(field_to_vec(f, im.m)), im.m);
}

Field BergmanSystem::apply_Q(const Field& f) const {
    const Impl& im = *impl_;
    if (f.domain != im.dom)
        throw std::invalid_argument("apply_Q: field from a different domain");
    const Eigen::VectorXd v = field_to_vec(f, im.m);
    return vec_to_field(*im.dom, v - im.project(v), im.m);
}

Field BergmanSystem::apply_teodorescu(const Field& f) const {
    const Impl& im = *impl_;
    if (f.domain != im.dom)
        throw std::invalid_argument("apply_teodorescu: field from a different domain");
    return vec_to_field(*im.dom, im.TE * field_to_vec(f, im.m), im.m);
}

Field BergmanSystem::apply_teodorescu_conj(const Field& f) const {
    const Impl& im = *impl_;
    if (f.domain != im.dom)
        throw std::invalid_argument("apply_teodorescu_conj: field from a different domain");
    return vec_to_field(*im.dom, im.TEC * field_to_vec(f, im.m), im.m);
}

Field bergman_projection(const VoxelDomain& dom, const Field& f,
                         const KernelEvaluator& kernel) {
    return BergmanSystem(dom, kernel).apply_P(f);
}

struct StokesAccess {
    static const BergmanSystem::Impl& impl(const BergmanSystem& s) { return *s.impl_; }
};

StokesResult stokes_solve(const VoxelDomain& dom, const Field& force, double eta,
                          const KernelEvaluator& kernel, const StokesOptions& opts) {
    if (!(eta > 0.0))
        throw std::invalid_argument("stokes_solve: eta must be positive");
    if (force.domain != &dom)
        throw std::invalid_argument("stokes_solve: force field from a different domain");

    const BergmanSystem sys(dom, kernel, opts.bergman);
    const auto& im = StokesAccess::impl(sys);
    const int m = im.m;
    const long nc = im.nc;

    const Eigen::VectorXd fv = field_to_vec(force, m);
    const Eigen::VectorXd tef = im.TE * fv;
    const Eigen::VectorXd qtef = tef - im.project(tef);

    // Pressure: Sc(Q p) = eta Sc(Q T_E F) plus a mean-zero gauge row, solved
    // as least squares; Q annihilates constants (they are monogenic and
    // reproduced by P), which is exactly the gauge freedom of p.
    Eigen::MatrixXd S(im.M, nc);
    for (long j = 0; j < nc; ++j) S.col(j) = im.W.col(j * m);
    const Eigen::MatrixXd G = im.boundary_solve(S);
    S.resize(0, 0);
    const Eigen::MatrixXd Y = im.FG * G;

    Eigen::MatrixXd A(nc + 1, nc);
    for (long k = 0; k < nc; ++k)
        for (long j = 0; j < nc; ++j)
            A(k, j) = (k == j ? 1.0 : 0.0) - Y(k * m, j);
    A.row(nc).setConstant(1.0 / static_cast<double>(nc));

    Eigen::VectorXd rhs(nc + 1);
    if (opts.project_force) {
        const Eigen::VectorXd teqf = im.TE * (fv - im.project(fv));
        const Eigen::VectorXd qteqf = teqf - im.project(teqf);
        for (long k = 0; k < nc; ++k) rhs[k] = eta * qteqf[k * m];
    } else {
        for (long k = 0; k < nc; ++k) rhs[k] = eta * qtef[k * m];
    }
    rhs[nc] = 0.0;

    // Gradient-penalized least squares: the normal equations of the stacked
    // system [A; w G] with G the forward-difference gradient between axis
    // neighbours. The gauge row keeps the constant direction invertible.
    std::vector<Eigen::Triplet<double>> gtr;
    long grow = 0;
    const double invh = 1.0 / dom.h();
    for (long j = 0; j < nc; ++j) {
        const std::vector<long>& co = dom.cells()[static_cast<std::size_t>(j)];
        for (int ax = 0; ax < dom.ambient_dim(); ++ax) {
            std::vector<long> co2 = co;
            co2[static_cast<std::size_t>(ax)] += 1;
            const long j2 = dom.cell_index(co2);
            if (j2 < 0) continue;
            gtr.emplace_back(grow, j2, invh);
            gtr.emplace_back(grow, j, -invh);
            ++grow;
        }
    }
    Eigen::SparseMatrix<double> Gfd(grow, nc);
    Gfd.setFromTriplets(gtr.begin(), gtr.end());
    const double w = opts.pressure_smoothing;
    Eigen::MatrixXd Nrm = A.transpose() * A;
    Nrm += w * w * Eigen::MatrixXd(Gfd.transpose() * Gfd);
    Eigen::VectorXd p = Nrm.ldlt().solve(A.transpose() * rhs);
    p.array() -= p.mean();

    // Velocity through the conjugated transform: Laplace = D conj(D), so
    // conj(D) u = (1/eta) Q p - Q T_E F and u = conj(T_E) applied to that
    // (u has zero trace, killing the boundary term of Borel-Pompeiu).
    Eigen::VectorXd ip = Eigen::VectorXd::Zero(im.N);
    for (long k = 0; k < nc; ++k) ip[k * m] = p[k];
    const Eigen::VectorXd qip = ip - im.project(ip);
    const Eigen::VectorXd integrand = (1.0 / eta) * qip - qtef;

    StokesResult out;
    out.u = vec_to_field(dom, Eigen::VectorXd(im.TEC * integrand), m);
    out.p = vec_to_field(dom, ip, m, true);

    const Field lap = laplacian_fd_field(out.u);
    const Field gradp = dirac_fd_field(out.p, DiracVariant::CauchyRiemann);
    Field mom = zero_field(dom);
    for (std::size_t k = 0; k < mom.values.size(); ++k)
        mom.values[k] = gradp.values[k] * (1.0 / eta) - lap.values[k] -
                        force.values[k];
    out.momentum_residual = field_max_norm_interior(mom, 2);
    out.divergence_residual = field_max_norm_interior(divergence_fd(out.u), 2);
    const BoundaryTrace tu = trace_field(out.u);
    double bres = 0.0;
    for (const Multivector& v : tu.values) bres = std::max(bres, v.norm());
    out.boundary_residual = bres;
    out.within_tolerance = out.momentum_residual <= opts.residual_tolerance &&
                           out.divergence_residual <= opts.residual_tolerance &&
                           out.boundary_residual <= opts.residual_tolerance;
    return out;
}

}  // namespace cla
