#include "cla/vahlen.hpp"

#include <cmath>
#include <stdexcept>

namespace cla {

VahlenMatrix VahlenMatrix::identity(int dim) {
    return {Multivector::scalar(dim, 1.0), Multivector(dim), Multivector(dim),
            Multivector::scalar(dim, 1.0)};
}

VahlenMatrix VahlenMatrix::translation(const Multivector& omega) {
    const int dim = omega.dim();
    return {Multivector::scalar(dim, 1.0), omega, Multivector(dim),
            Multivector::scalar(dim, 1.0)};
}

VahlenMatrix VahlenMatrix::inversion(int dim) {
    return {Multivector(dim), Multivector::scalar(dim, -1.0),
            Multivector::scalar(dim, 1.0), Multivector(dim)};
}

Multivector pseudo_determinant(const VahlenMatrix& m) {
    return m.a * reversion(m.d) - m.b * reversion(m.c);
}

namespace {

bool is_paravector_within(const Multivector& w, double tol) {
    return non_paravector_residue(w) <= tol * (1.0 + w.norm());
}

}  // namespace

bool is_vahlen(const VahlenMatrix& m, double tol) {
    const Multivector det = pseudo_determinant(m);
    Multivector defect = det;
    defect[0] -= 1.0;
    if (defect.norm() > tol) return false;
    return is_paravector_within(m.a * reversion(m.c), tol) &&
           is_paravector_within(m.c * reversion(m.d), tol) &&
           is_paravector_within(m.d * reversion(m.b), tol) &&
           is_paravector_within(m.b * reversion(m.c), tol);
}

VahlenMatrix matrix_mul(const VahlenMatrix& m1, const VahlenMatrix& m2) {
    return {m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
            m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d};
}

VahlenMatrix matrix_inverse(const VahlenMatrix& m) {
    return {reversion(m.d), -reversion(m.b), -reversion(m.c), reversion(m.a)};
}

Multivector moebius_denominator(const VahlenMatrix& m, const Paravector& x) {
    return m.c * x.embed() + m.d;
}

Paravector mobius_apply(const VahlenMatrix& m, const Paravector& x, double tol) {
    const Multivector xe = x.embed();
    const Multivector num = m.a * xe + m.b;
    const Multivector den = m.c * xe + m.d;
    const Multivector image = num * paravector_product_inverse(den, tol);
    return to_paravector(image, tol);
}

Multivector automorphy_factor(const VahlenMatrix& m, const Paravector& x) {
    const Multivector den = moebius_denominator(m, x);
    const double nsq = den.norm_sq();
    if (nsq < 1e-300) throw pole_error("automorphy factor at a pole");
    const int n = x.n();
    const double scale = 1.0 / std::pow(std::sqrt(nsq), n);
    return conjugation(den) * scale;
}

double bottom_row_norm_sq(const VahlenMatrix& m) {
    return m.c.norm_sq() + m.d.norm_sq();
}

std::vector<double> lattice_action_apply(const LatticeAction& act,
                                         const std::vector<long>& m,
                                         const std::vector<double>& x) {
    const int ambient = static_cast<int>(x.size());
    if (act.p < 1 || act.p > ambient)
        throw std::invalid_argument("lattice action rank out of range");
    if (static_cast<int>(m.size()) != act.p)
        throw std::invalid_argument("integer tuple size must equal the action rank");
    if (act.twisted && act.p != ambient)
        throw std::invalid_argument("twisted action requires full rank");
    std::vector<double> y = x;
    const int shift_count = act.twisted ? act.p - 1 : act.p;
    for (int i = 0; i < shift_count; ++i) y[i] += static_cast<double>(m[i]);
    if (act.twisted) {
        const long k = m[act.p - 1];
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        y[ambient - 1] = sign * x[ambient - 1] + static_cast<double>(k);
    }
    return y;
}

}  // namespace cla
