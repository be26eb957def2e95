#include "cla/fd.hpp"

namespace cla {

namespace {

Multivector partial_fd(const FieldFn& f, std::vector<double> x, std::size_t axis, double h) {
    x[axis] += h;
    Multivector plus = f(x);
    x[axis] -= 2.0 * h;
    Multivector minus = f(x);
    return (plus - minus) * (1.0 / (2.0 * h));
}

}  // namespace

Multivector dirac_apply_fd(const FieldFn& f, const std::vector<double>& x, double h,
                           DiracVariant variant) {
    if (x.empty()) throw std::invalid_argument("dirac_apply_fd: empty point");
    const Multivector probe = f(x);
    const int dim = probe.dim();
    Multivector out(dim);
    if (variant == DiracVariant::CauchyRiemann) {
        out += partial_fd(f, x, 0, h);
        for (std::size_t i = 1; i < x.size(); ++i)
            out += Multivector::basis(dim, static_cast<int>(i)) * partial_fd(f, x, i, h);
    } else {
        for (std::size_t i = 0; i < x.size(); ++i)
            out += Multivector::basis(dim, static_cast<int>(i) + 1) * partial_fd(f, x, i, h);
    }
    return out;
}

Multivector dirac_conj_apply_fd(const FieldFn& f, const std::vector<double>& x, double h) {
    if (x.empty()) throw std::invalid_argument("dirac_conj_apply_fd: empty point");
    const Multivector probe = f(x);
    const int dim = probe.dim();
    Multivector out = partial_fd(f, x, 0, h);
    for (std::size_t i = 1; i < x.size(); ++i)
        out -= Multivector::basis(dim, static_cast<int>(i)) * partial_fd(f, x, i, h);
    return out;
}

Multivector dirac_squared_fd(const FieldFn& f, const std::vector<double>& x, double h,
                             DiracVariant variant) {
    FieldFn df = [&f, h, variant](const std::vector<double>& y) {
        return dirac_apply_fd(f, y, h, variant);
    };
    return dirac_apply_fd(df, x, h, variant);
}

Multivector laplacian_fd(const FieldFn& f, const std::vector<double>& x, double h) {
    Multivector center = f(x);
    Multivector out(center.dim());
    std::vector<double> y = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] + h;
        Multivector plus = f(y);
        y[i] = x[i] - h;
        Multivector minus = f(y);
        y[i] = x[i];
        out += (plus + minus - 2.0 * center) * (1.0 / (h * h));
    }
    return out;
}

}  // namespace cla
