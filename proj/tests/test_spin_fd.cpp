#include <doctest.h>

#include <random>

#include "cla/fd.hpp"
#include "cla/spin.hpp"

using namespace cla;

namespace {

Multivector random_unit_vector(int dim, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Multivector v(dim);
    double nsq = 0.0;
    while (nsq < 1e-4) {
        for (int i = 1; i <= dim; ++i) v[1u << (i - 1)] = u(rng);
        nsq = v.norm_sq();
    }
    return v * (1.0 / v.norm());
}

}  // namespace

TEST_CASE("single-factor pin action on the basis") {
    const int n = 2;
    SpinElement a = SpinElement::from_factors(n, {Multivector::basis(n, 1)});
    auto e1 = Multivector::basis(n, 1);
    auto e2 = Multivector::basis(n, 2);

    // e1 e1 rev(e1) = -e1, e1 e2 rev(e1) = +e2
    CHECK((pin_apply(a, e1) + e1).norm() <= 1e-14);
    CHECK((pin_apply(a, e2) - e2).norm() <= 1e-14);

    // one factor: the twist flips the overall sign
    CHECK((pin_apply(a, e1, true) - e1).norm() <= 1e-14);
    CHECK((pin_apply(a, e2, true) + e2).norm() <= 1e-14);
}

TEST_CASE("pin action preserves norms and composes multiplicatively") {
    std::mt19937 rng(2024);
    for (int dim = 2; dim <= 4; ++dim) {
        for (int rep = 0; rep < 6; ++rep) {
            auto f1 = random_unit_vector(dim, rng);
            auto f2 = random_unit_vector(dim, rng);
            SpinElement a = SpinElement::from_factors(dim, {f1});
            SpinElement b = SpinElement::from_factors(dim, {f2});
            SpinElement ab = SpinElement::from_factors(dim, {f1, f2});
            auto x = random_unit_vector(dim, rng);

            Multivector once = pin_apply(b, x);
            Multivector twice = pin_apply(a, once);
            CHECK((twice - pin_apply(ab, x)).norm() <= 1e-12);
            CHECK(pin_apply(ab, x).norm() == doctest::Approx(x.norm()).epsilon(1e-12));
            CHECK(pin_apply(ab, x, true).norm() == doctest::Approx(x.norm()).epsilon(1e-12));
            CHECK(grade_part(pin_apply(ab, x), 1).norm() ==
                  doctest::Approx(pin_apply(ab, x).norm()).epsilon(1e-12));
        }
    }
}

TEST_CASE("spin element construction rejects non-vectors") {
    const int n = 3;
    Multivector not_a_vector = Multivector::scalar(n, 1.0) + Multivector::basis(n, 1);
    CHECK_THROWS_AS(SpinElement::from_factors(n, {not_a_vector}), std::invalid_argument);
    CHECK_THROWS_AS(SpinElement::from_factors(n, {Multivector(n)}), std::invalid_argument);
    CHECK(SpinElement::identity(n).factor_count() == 0);
}

TEST_CASE("finite-difference Dirac operators on polynomials") {
    const double h = 1e-5;

    SUBCASE("vector variant, D^2 = -Laplacian") {
        // f(x_1, x_2) = x_1^2 + x_2^2 as a scalar field in Cl_2
        FieldFn f = [](const std::vector<double>& x) {
            return Multivector::scalar(2, x[0] * x[0] + x[1] * x[1]);
        };
        std::vector<double> at{0.3, -0.7};
        Multivector df = dirac_apply_fd(f, at, h, DiracVariant::Vector);
        CHECK(df[0b01] == doctest::Approx(2.0 * at[0]).epsilon(1e-6));
        CHECK(df[0b10] == doctest::Approx(2.0 * at[1]).epsilon(1e-6));

        Multivector d2 = dirac_squared_fd(f, at, h, DiracVariant::Vector);
        Multivector lap = laplacian_fd(f, at, h);
        CHECK(d2[0] == doctest::Approx(-4.0).epsilon(1e-5));
        CHECK((d2 + lap).norm() <= 1e-4);
    }

    SUBCASE("Cauchy-Riemann variant annihilates z_1 = x_1 - x_0 e_1") {
        FieldFn f = [](const std::vector<double>& x) {
            Multivector m(2);
            m[0] = x[1];
            m[0b01] = -x[0];
            return m;
        };
        std::vector<double> at{0.4, 0.2, -0.1};
        Multivector df = dirac_apply_fd(f, at, h, DiracVariant::CauchyRiemann);
        CHECK(df.norm() <= 1e-9);

        // conj-Dirac then Dirac gives the (componentwise) Laplacian: zero here
        FieldFn dfh = [&](const std::vector<double>& y) {
            return dirac_apply_fd(f, y, h, DiracVariant::CauchyRiemann);
        };
        CHECK(dirac_conj_apply_fd(dfh, at, h).norm() <= 1e-4);
    }

    SUBCASE("divergence of u = (x_0, 0) is 1") {
        // Sc(conj-Dirac u) with u the paravector field x_0 (scalar slot)
        FieldFn u = [](const std::vector<double>& x) {
            return Multivector::scalar(1, x[0]);
        };
        std::vector<double> at{0.5, 0.25};
        Multivector du = dirac_conj_apply_fd(u, at, h);
        CHECK(scalar_part(du) == doctest::Approx(1.0).epsilon(1e-8));
    }
}
