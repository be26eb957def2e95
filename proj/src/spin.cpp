#include "cla/spin.hpp"

#include <bit>
#include <cmath>

namespace cla {

SpinElement SpinElement::from_factors(int dim, const std::vector<Multivector>& factors) {
    Multivector prod = Multivector::scalar(dim, 1.0);
    for (const Multivector& f : factors) {
        if (f.dim() != dim)
            throw std::invalid_argument("SpinElement: factor dimension mismatch");
        double nsq = 0.0;
        for (std::uint32_t m = 0; m < f.size(); ++m) {
            if (std::popcount(m) != 1 && f[m] != 0.0)
                throw std::invalid_argument("SpinElement: factor is not grade-1");
            if (std::popcount(m) == 1) nsq += f[m] * f[m];
        }
        if (nsq == 0.0) throw std::invalid_argument("SpinElement: zero factor");
        prod = prod * (f * (1.0 / std::sqrt(nsq)));
    }
    return SpinElement(std::move(prod), static_cast<int>(factors.size()));
}

Multivector pin_apply(const SpinElement& a, const Multivector& x, bool use_sign_twist) {
    Multivector y = a.value() * x * reversion(a.value());
    if (use_sign_twist && (a.factor_count() & 1)) y *= -1.0;
    return y;
}

}  // namespace cla
