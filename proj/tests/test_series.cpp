#include <doctest.h>

#include <cmath>
#include <random>

#include "cla/fd.hpp"
#include "cla/series.hpp"

using namespace cla;

namespace {

const Lattice& planar_z2() {
    // rank-2 integer lattice in the x0-x1 plane of R^3 (n = 2)
    static Lattice lat(3, {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
    return lat;
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

// q_0(w) for a paravector, the closed form the series terms use
Multivector q0_paravector(const Paravector& w) {
    return w.conj().embed() * std::pow(w.norm_sq(), -0.5 * (w.n() + 1));
}

VahlenMatrix lower_shear_3(int dim) {
    // [[1, 0], [3, 1]] = J^{-1} T^{-3} J, a level-3 element with c != 0
    VahlenMatrix m = VahlenMatrix::identity(dim);
    m.c = Multivector::scalar(dim, 3.0);
    return m;
}

}  // namespace

TEST_CASE("rank-0 lattice reproduces the bare kernel exactly") {
    Lattice trivial(3, {});
    MultiIndex m{1, 0, 0};
    std::vector<double> x{0.3, -0.2, 0.5};
    auto res = eisenstein_epsilon(m, trivial, x, 5.0);
    CHECK(res.terms_summed == 1);
    CHECK(res.tail_bound == 0.0);
    Multivector direct = evaluate(q_m(3, m), x);
    CHECK((res.value - direct).norm() <= 1e-14 * direct.norm());

    auto ck = torus_cauchy_kernel(trivial, {0.4, 0.1, 0.2}, {0.1, -0.1, 0.1}, 3.0);
    Multivector q0 = evaluate(cauchy_kernel_q0(3), {0.3, 0.2, 0.1});
    CHECK((ck.value - q0).norm() <= 1e-14 * q0.norm());
}

TEST_CASE("lattice series argument validation") {
    const Lattice& lat = planar_z2();
    std::vector<double> x{0.25, 0.3, 0.4};
    // |m| = 2 < rank + 1 = 3
    CHECK_THROWS_AS(eisenstein_epsilon({1, 1, 0}, lat, x, 6.0), std::domain_error);
    CHECK_THROWS_AS(eisenstein_epsilon({1, 1, 1, 1}, lat, x, 6.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(eisenstein_epsilon({4, 0, 0}, lat, {0.1, 0.2}, 6.0),
                    std::invalid_argument);
    // pole: x on the translated lattice
    CHECK_THROWS_AS(eisenstein_epsilon({4, 0, 0}, lat, {2.0, -1.0, 0.0}, 6.0),
                    pole_error);
    // character split index out of range
    CHECK_THROWS_AS(
        eisenstein_twisted({4, 0, 0}, lat, BundleCharacter{2}, x, 6.0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        eisenstein_twisted({4, 0, 0}, lat, BundleCharacter{-1}, x, 6.0),
        std::invalid_argument);
    // torus kernel needs rank <= n - 1
    CHECK_THROWS_AS(torus_cauchy_kernel(lat, x, {0.0, 0.0, 0.1}, 6.0),
                    std::domain_error);
    CHECK_THROWS_AS(
        torus_cauchy_kernel(Lattice(3, {{1.0, 0.0, 0.0}}), x, x, 6.0), pole_error);
}

TEST_CASE("Eisenstein series matches a brute-force orbit sum") {
    const Lattice& lat = planar_z2();
    MultiIndex m{0, 0, 4};
    std::vector<double> x{0.25, 0.3, 0.4};
    auto res = eisenstein_epsilon(m, lat, x, 6.0);

    auto f = q_m(3, m);
    Multivector brute(2);
    for (long i = -7; i <= 7; ++i)
        for (long j = -7; j <= 7; ++j) {
            double nsq = double(i) * i + double(j) * j;
            if (nsq > 36.0 * (1.0 + 1e-12) + 1e-12) continue;
            brute += evaluate(f, {x[0] + i, x[1] + j, x[2]});
        }
    CHECK((res.value - brute).norm() <= 1e-12 * brute.norm());
    CHECK(res.terms_summed == 113);  // lattice points of Z^2 with |k| <= 6
}

TEST_CASE("Eisenstein periodicity and radius consistency within tails") {
    const Lattice& lat = planar_z2();
    MultiIndex m{0, 0, 4};
    std::vector<double> x{0.25, 0.3, 0.4};

    auto base = eisenstein_epsilon(m, lat, x, 8.0);
    CHECK(base.tail_bound < 0.2 * base.value.norm());

    auto shifted = eisenstein_epsilon(m, lat, add(x, lat.point({1, 0})), 8.0);
    CHECK((shifted.value - base.value).norm() <= base.tail_bound + shifted.tail_bound);

    auto fine = eisenstein_epsilon(m, lat, x, 16.0);
    CHECK((fine.value - base.value).norm() <= base.tail_bound);
    CHECK(fine.tail_bound < base.tail_bound);
}

TEST_CASE("tail certification on random points") {
    const Lattice& lat = planar_z2();
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x{u(rng), u(rng), 0.1 + 0.5 * u(rng)};
        MultiIndex m{0, 0, 0};
        m[trial % 3] += 3;
        m[(trial + 1) % 3] += trial % 2;
        auto coarse = eisenstein_epsilon(m, lat, x, 6.0);
        auto fine = eisenstein_epsilon(m, lat, x, 9.0);
        CHECK((fine.value - coarse.value).norm() <= coarse.tail_bound);
    }
}

TEST_CASE("serial and parallel reductions agree exactly") {
    const Lattice& lat = planar_z2();
    MultiIndex m{1, 0, 3};
    std::vector<double> x{0.25, 0.3, 0.4};
    SeriesOptions serial;
    serial.deterministic = true;
    auto a = eisenstein_epsilon(m, lat, x, 10.0, serial);
    auto b = eisenstein_epsilon(m, lat, x, 10.0);
    REQUIRE(a.terms_summed == b.terms_summed);
    for (std::uint32_t c = 0; c < a.value.size(); ++c)
        CHECK(a.value[c] == b.value[c]);
}

TEST_CASE("twisted series signs") {
    const Lattice& lat = planar_z2();
    MultiIndex m{0, 0, 4};
    std::vector<double> x{0.25, 0.3, 0.4};
    const double R = 8.0;

    auto plain = eisenstein_epsilon(m, lat, x, R);
    auto tw0 = eisenstein_twisted(m, lat, BundleCharacter{0}, x, R);
    auto tw1 = eisenstein_twisted(m, lat, BundleCharacter{1}, x, R);

    // anti-periodic in the twisted direction, periodic in the other
    auto tw0_s0 = eisenstein_twisted(m, lat, BundleCharacter{0},
                                     add(x, lat.point({1, 0})), R);
    CHECK((tw0_s0.value + tw0.value).norm() <= tw0.tail_bound + tw0_s0.tail_bound);
    auto tw0_s1 = eisenstein_twisted(m, lat, BundleCharacter{0},
                                     add(x, lat.point({0, 1})), R);
    CHECK((tw0_s1.value - tw0.value).norm() <= tw0.tail_bound + tw0_s1.tail_bound);
    auto tw1_s1 = eisenstein_twisted(m, lat, BundleCharacter{1},
                                     add(x, lat.point({0, 1})), R);
    CHECK((tw1_s1.value + tw1.value).norm() <= tw1.tail_bound + tw1_s1.tail_bound);

    // plain + (l=0)-twisted doubles the even-k0 sublattice sum at equal R
    Lattice even0(3, {{2.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
    auto sub = eisenstein_epsilon(m, even0, x, R);
    Multivector lhs = plain.value + tw0.value;
    CHECK((lhs - sub.value * 2.0).norm() <= 1e-11 * (1.0 + lhs.norm()));

    // the characters select genuinely different sections
    CHECK((plain.value - tw0.value).norm() > 1e-3);
    CHECK((plain.value - tw1.value).norm() > 1e-3);
    CHECK((tw0.value - tw1.value).norm() > 1e-3);
}

TEST_CASE("truncated Eisenstein sums stay numerically monogenic") {
    const Lattice& lat = planar_z2();
    MultiIndex m{0, 0, 4};
    std::vector<double> x{0.25, 0.3, 0.4};
    FieldFn f = [&](const std::vector<double>& y) {
        return eisenstein_epsilon(m, lat, y, 6.0).value;
    };
    double coarse = dirac_apply_fd(f, x, 1e-2, DiracVariant::CauchyRiemann).norm();
    double fine = dirac_apply_fd(f, x, 5e-3, DiracVariant::CauchyRiemann).norm();
    // the truncated sum is exactly monogenic, so the FD residual is pure
    // discretization error and must drop roughly like h^2
    CHECK(fine < 0.5 * coarse);
}

TEST_CASE("torus Cauchy kernel on a rank-1 lattice") {
    Lattice line(3, {{1.0, 0.0, 0.0}});
    std::vector<double> x{0.3, 0.4, 0.2};
    std::vector<double> y{0.1, 0.1, -0.1};

    auto res = torus_cauchy_kernel(line, x, y, 30.0);
    // brute force over k e_0
    auto q0 = cauchy_kernel_q0(3);
    Multivector brute(2);
    for (long k = -30; k <= 30; ++k)
        brute += evaluate(q0, {x[0] - y[0] + k, x[1] - y[1], x[2] - y[2]});
    CHECK((res.value - brute).norm() <= 1e-12 * brute.norm());

    // periodicity in either argument within the certified tails
    auto sx = torus_cauchy_kernel(line, add(x, {1.0, 0.0, 0.0}), y, 30.0);
    CHECK((sx.value - res.value).norm() <= res.tail_bound + sx.tail_bound);

    // x - y at a symmetry center kills the odd terms: the sum over
    // (k + 1/2) e_0 cancels pairwise except for the one boundary term the
    // ball cutoff leaves unpaired, |q_0((K + 1/2) e_0)| = (K + 1/2)^{-2}
    auto center = torus_cauchy_kernel(line, {0.5, 0.0, 0.0}, {0.0, 0.0, 0.0}, 40.0);
    CHECK(center.value.norm() <= 1.5 / (40.5 * 40.5));
    auto center2 = torus_cauchy_kernel(line, {0.5, 0.0, 0.0}, {0.0, 0.0, 0.0}, 80.0);
    CHECK(center2.value.norm() < 0.5 * center.value.norm());
}

TEST_CASE("hyperbolic Eisenstein series: trivial truncation and validation") {
    Paravector x(0.2, {0.1, 1.0});  // x = 0.2 + 0.1 e_1 + 1.0 e_2, n = 2
    SeriesOptions opts;
    opts.max_word_length = 2;
    auto res = hyperbolic_eisenstein(x, 1, 3, 0.1, 2.5, opts);
    CHECK(res.terms_summed == 1);
    CHECK(res.value[0] == doctest::Approx(1.0));
    Multivector rest = res.value;
    rest[0] = 0.0;
    CHECK(rest.norm() <= 1e-15);

    // Hecke factor (x_n / 1)^sigma survives for the identity coset
    Paravector high(0.2, {0.1, 4.0});
    auto scaled = hyperbolic_eisenstein(high, 1, 3, 0.25, 2.5, opts);
    CHECK(scaled.value[0] == doctest::Approx(std::pow(4.0, 0.25)));

    CHECK_THROWS_AS(hyperbolic_eisenstein(Paravector(0.2, {0.1, -1.0}), 1, 3, 0.1, 9.0),
                    std::domain_error);
    CHECK_THROWS_AS(hyperbolic_eisenstein(x, 1, 1, 0.1, 9.0), std::domain_error);
    CHECK_THROWS_AS(hyperbolic_eisenstein(x, 1, 3, 0.0, 9.0), std::domain_error);
}

TEST_CASE("hyperbolic Eisenstein series: bounds, sigma schedule, automorphy") {
    Paravector x(0.1, {0.2, 0.9});
    SeriesOptions opts;
    opts.max_word_length = 12;

    // row norms in Gamma_1[3] jump from 1 to 10, 13, 19, ...
    auto coarse = hyperbolic_eisenstein(x, 1, 3, 0.5, 12.0, opts);
    auto fine = hyperbolic_eisenstein(x, 1, 3, 0.5, 25.0, opts);
    CHECK(coarse.terms_summed > 1);
    CHECK(fine.terms_summed > coarse.terms_summed);
    CHECK((fine.value - coarse.value).norm() <= coarse.tail_bound);

    // sigma sequence is Cauchy: successive differences shrink
    auto e1 = hyperbolic_eisenstein(x, 1, 3, 0.2, 12.0, opts);
    auto e2 = hyperbolic_eisenstein(x, 1, 3, 0.1, 12.0, opts);
    auto e3 = hyperbolic_eisenstein(x, 1, 3, 0.05, 12.0, opts);
    double d12 = (e2.value - e1.value).norm();
    double d23 = (e3.value - e2.value).norm();
    CHECK(d23 < d12);
    Multivector limit = hecke_extrapolate({0.2, 0.1, 0.05},
                                          {e1.value, e2.value, e3.value});
    CHECK((limit - e3.value).norm() <= 2.0 * d23 + 1e-12);

    // automorphy: E(x) = q_0(cx + d) E(M<x>) up to truncation error
    auto base = hyperbolic_eisenstein(x, 1, 3, 0.5, 16.0, opts);
    VahlenMatrix shear = lower_shear_3(2);
    Paravector mx = mobius_apply(shear, x);
    auto at_mx = hyperbolic_eisenstein(mx, 1, 3, 0.5, 16.0, opts);
    Multivector q0j = q0_paravector(to_paravector(moebius_denominator(shear, x)));
    Multivector rhs = q0j * at_mx.value;
    CHECK((base.value - rhs).norm() <=
          base.tail_bound + q0j.norm() * at_mx.tail_bound + 1e-9);
}

TEST_CASE("Poincare series: trivial truncation, cusp decay, consistency") {
    Paravector x(0.2, {0.1, 1.0});
    Paravector w(0.5, {-0.3, 0.7});
    SeriesOptions trivial;
    trivial.max_word_length = 2;
    auto res = poincare_series(x, w, 1, 3, 0.1, 2.5, trivial);
    CHECK(res.terms_summed == 1);
    Multivector direct = q0_paravector(w + x);
    CHECK((res.value - direct).norm() <= 1e-14 * direct.norm());

    // pole when w + M<x> hits zero for an included element
    CHECK_THROWS_AS(
        poincare_series(x, Paravector(-0.2, {-0.1, -1.0}), 1, 3, 0.1, 2.5, trivial),
        pole_error);

    SeriesOptions opts;
    opts.max_word_length = 10;
    const double bound = 9.0;
    double prev = 1e300;
    for (double t : {2.0, 4.0, 8.0}) {
        Paravector cusp(0.0, {0.0, t});
        auto val = poincare_series(cusp, w, 1, 3, 0.1, bound, opts);
        CHECK(val.value.norm() < prev);
        prev = val.value.norm();
    }

    auto coarse = poincare_series(x, w, 1, 3, 0.25, 12.0, opts);
    auto fine = poincare_series(x, w, 1, 3, 0.25, 20.0, opts);
    CHECK(fine.terms_summed > coarse.terms_summed);
    CHECK((fine.value - coarse.value).norm() <= coarse.tail_bound);
}

TEST_CASE("hyperbolic Cauchy kernel: flat reduction, invariance, convergence guard") {
    Paravector x(0.3, {0.1, 0.8});
    Paravector y(-0.2, {0.4, 1.1});
    SeriesOptions trivial;
    trivial.max_word_length = 2;
    auto res = hyperbolic_cauchy_kernel(x, y, 0, 3, 2.5, trivial);
    CHECK(res.terms_summed == 1);
    Multivector flat = q0_paravector(y - x);
    CHECK((res.value - flat).norm() <= 1e-14 * flat.norm());

    // p >= n - 1 has no absolutely convergent orbit sum here
    CHECK_THROWS_AS(hyperbolic_cauchy_kernel(x, y, 1, 3, 9.0), std::domain_error);
    // orbit coincidence
    CHECK_THROWS_AS(hyperbolic_cauchy_kernel(x, x, 0, 3, 2.5, trivial), pole_error);

    SeriesOptions opts;
    opts.max_word_length = 14;
    auto coarse = hyperbolic_cauchy_kernel(x, y, 0, 3, 12.0, opts);
    auto fine = hyperbolic_cauchy_kernel(x, y, 0, 3, 20.0, opts);
    CHECK(fine.terms_summed > coarse.terms_summed);
    CHECK((fine.value - coarse.value).norm() <= coarse.tail_bound);

    // C(x, y) = autfac(M, x) C(M<x>, y) up to truncation error
    VahlenMatrix shear = lower_shear_3(2);
    Paravector mx = mobius_apply(shear, x);
    auto at_mx = hyperbolic_cauchy_kernel(mx, y, 0, 3, 16.0, opts);
    Multivector fac = automorphy_factor(shear, x);
    Multivector rhs = fac * at_mx.value;
    CHECK((fine.value - rhs).norm() <=
          fine.tail_bound + fac.norm() * at_mx.tail_bound + 1e-9);
}

TEST_CASE("hecke_extrapolate recovers a linear sigma dependence") {
    Multivector a(2), b(2);
    a[0] = 1.5;
    a[1] = -0.25;
    b[3] = 2.0;
    std::vector<double> sigmas{0.2, 0.1, 0.05};
    std::vector<Multivector> vals;
    for (double s : sigmas) vals.push_back(a + b * s);
    Multivector rec = hecke_extrapolate(sigmas, vals);
    CHECK((rec - a).norm() <= 1e-12);
    CHECK_THROWS_AS(hecke_extrapolate({0.1}, {a}), std::invalid_argument);
    CHECK_THROWS_AS(hecke_extrapolate({0.1, 0.1}, {a, a}), std::invalid_argument);
}
