#include <doctest.h>

#include <random>

#include "cla/vahlen.hpp"

using namespace cla;

namespace {

Paravector random_point(int n, std::mt19937& rng, bool upper = false) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& c : v) c = u(rng);
    if (upper) v[n - 1] = std::abs(v[n - 1]) + 0.1;
    return Paravector(u(rng), std::move(v));
}

}  // namespace

TEST_CASE("generator matrices satisfy the group conditions") {
    const int n = 3;
    auto id = VahlenMatrix::identity(n);
    auto t = VahlenMatrix::translation(Multivector::basis(n, 1));
    auto j = VahlenMatrix::inversion(n);

    for (const auto& m : {id, t, j}) {
        CHECK(is_vahlen(m));
        Multivector det = pseudo_determinant(m);
        CHECK(det[0] == doctest::Approx(1.0));
    }

    // pseudo-determinant is multiplicative along products of generators
    VahlenMatrix prod = matrix_mul(matrix_mul(t, j), t);
    CHECK(is_vahlen(prod));
    CHECK((pseudo_determinant(prod) - Multivector::scalar(n, 1.0)).norm() <= 1e-12);

    VahlenMatrix bad = id;
    bad.a = Multivector::scalar(n, 2.0);
    CHECK_FALSE(is_vahlen(bad));
}

TEST_CASE("matrix inverse through reversion") {
    const int n = 2;
    std::mt19937 rng(5150);
    auto gens = std::vector<VahlenMatrix>{
        VahlenMatrix::translation(Multivector::scalar(n, 1.0)),
        VahlenMatrix::translation(Multivector::basis(n, 1)),
        VahlenMatrix::inversion(n)};
    std::uniform_int_distribution<int> pick(0, 2);
    VahlenMatrix m = VahlenMatrix::identity(n);
    for (int i = 0; i < 8; ++i) m = matrix_mul(m, gens[pick(rng)]);
    VahlenMatrix mi = matrix_inverse(m);
    VahlenMatrix should_be_id = matrix_mul(m, mi);
    CHECK((should_be_id.a - Multivector::scalar(n, 1.0)).norm() <= 1e-12);
    CHECK(should_be_id.b.norm() <= 1e-12);
    CHECK(should_be_id.c.norm() <= 1e-12);
    CHECK((should_be_id.d - Multivector::scalar(n, 1.0)).norm() <= 1e-12);
}

TEST_CASE("translation and inversion act as expected") {
    const int n = 2;
    auto t = VahlenMatrix::translation(Multivector::basis(n, 1));
    Paravector x(0.5, {0.25, 1.0});
    Paravector tx = mobius_apply(t, x);
    CHECK(tx.x0() == doctest::Approx(0.5));
    CHECK(tx.component(1) == doctest::Approx(1.25));
    CHECK(tx.component(2) == doctest::Approx(1.0));

    // J fixes e_1: J<x> = -x^{-1} and e_1^{-1} = -e_1
    auto j = VahlenMatrix::inversion(n);
    Paravector e1(0.0, {1.0, 0.0});
    Paravector je1 = mobius_apply(j, e1);
    CHECK(je1.x0() == doctest::Approx(0.0));
    CHECK(je1.component(1) == doctest::Approx(1.0));
    CHECK(je1.component(2) == doctest::Approx(0.0));

    CHECK_THROWS_AS(mobius_apply(j, Paravector(0.0, {0.0, 0.0})), pole_error);
}

TEST_CASE("action is a homomorphism and preserves the upper half space") {
    const int n = 3;
    std::mt19937 rng(808);
    auto gens = std::vector<VahlenMatrix>{
        VahlenMatrix::translation(Multivector::scalar(n, 1.0)),
        VahlenMatrix::translation(Multivector::basis(n, 1)),
        VahlenMatrix::translation(Multivector::basis(n, 2)),
        VahlenMatrix::inversion(n)};
    std::uniform_int_distribution<int> pick(0, 3);

    for (int rep = 0; rep < 25; ++rep) {
        VahlenMatrix m1 = VahlenMatrix::identity(n);
        VahlenMatrix m2 = VahlenMatrix::identity(n);
        for (int i = 0; i < 5; ++i) {
            m1 = matrix_mul(m1, gens[pick(rng)]);
            m2 = matrix_mul(m2, gens[pick(rng)]);
        }
        Paravector x = random_point(n, rng, true);

        Paravector lhs = mobius_apply(matrix_mul(m1, m2), x);
        Paravector rhs = mobius_apply(m1, mobius_apply(m2, x));
        CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));

        CHECK(rhs.component(n) > 0.0);
    }
}

TEST_CASE("denominator and automorphy factor cocycles") {
    const int n = 2;
    std::mt19937 rng(4242);
    auto gens = std::vector<VahlenMatrix>{
        VahlenMatrix::translation(Multivector::scalar(n, 1.0)),
        VahlenMatrix::translation(Multivector::basis(n, 1)),
        VahlenMatrix::inversion(n)};
    std::uniform_int_distribution<int> pick(0, 2);

    for (int rep = 0; rep < 50; ++rep) {
        VahlenMatrix m1 = VahlenMatrix::identity(n);
        VahlenMatrix m2 = VahlenMatrix::identity(n);
        for (int i = 0; i < 4; ++i) {
            m1 = matrix_mul(m1, gens[pick(rng)]);
            m2 = matrix_mul(m2, gens[pick(rng)]);
        }
        Paravector x = random_point(n, rng, true);
        Paravector m2x = mobius_apply(m2, x);

        Multivector j12 = moebius_denominator(matrix_mul(m1, m2), x);
        Multivector jchain = moebius_denominator(m1, m2x) * moebius_denominator(m2, x);
        CHECK((j12 - jchain).norm() <= 1e-9 * (1.0 + j12.norm()));

        // conjugation reverses the order of the factors
        Multivector a12 = automorphy_factor(matrix_mul(m1, m2), x);
        Multivector achain = automorphy_factor(m2, x) * automorphy_factor(m1, m2x);
        CHECK((a12 - achain).norm() <= 1e-9 * (1.0 + a12.norm()));
    }
}

TEST_CASE("automorphy factor norm scales as |cx+d|^(1-n)") {
    const int n = 3;
    auto j = VahlenMatrix::inversion(n);
    Paravector x(0.5, {0.25, -0.5, 1.0});
    Multivector f = automorphy_factor(j, x);
    CHECK(f.norm() == doctest::Approx(std::pow(x.norm(), 1 - n)).epsilon(1e-12));
}

TEST_CASE("integer lattice actions") {
    LatticeAction shift{2, false};
    std::vector<double> x{0.1, 0.2, 0.3};
    auto y = lattice_action_apply(shift, {1, 0}, x);
    CHECK(y[0] == doctest::Approx(1.1));
    CHECK(y[1] == doctest::Approx(0.2));
    CHECK(y[2] == doctest::Approx(0.3));

    LatticeAction klein{3, true};
    auto z = lattice_action_apply(klein, {0, 0, 1}, x);
    CHECK(z[0] == doctest::Approx(0.1));
    CHECK(z[1] == doctest::Approx(0.2));
    CHECK(z[2] == doctest::Approx(0.7));

    // odd twists are involutions on the last coordinate
    auto zz = lattice_action_apply(klein, {0, 0, 1}, z);
    CHECK(zz[2] == doctest::Approx(x[2]));

    CHECK_THROWS_AS(lattice_action_apply(LatticeAction{2, true}, {0, 1}, x),
                    std::invalid_argument);
    CHECK_THROWS_AS(lattice_action_apply(shift, {1}, x), std::invalid_argument);
}
