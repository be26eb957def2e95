#pragma once

#include "cla/multivector.hpp"

namespace cla {

// Element of the pin group, kept as the product of its unit-vector factors.
// Construction is only possible from a factor list; there is no membership
// test for arbitrary multivectors.
class SpinElement {
public:
    // Each factor must be a nonzero grade-1 vector; factors are normalized
    // to unit length. An empty list gives the identity.
    static SpinElement from_factors(int dim, const std::vector<Multivector>& factors);

    static SpinElement identity(int dim) { return from_factors(dim, {}); }

    const Multivector& value() const { return value_; }
    int factor_count() const { return factor_count_; }

private:
    SpinElement(Multivector value, int count)
        : value_(std::move(value)), factor_count_(count) {}
    Multivector value_;
    int factor_count_;
};

// Orthogonal action x -> a x reversion(a) on grade-1 vectors. With
// use_sign_twist the result is negated once per factor, i.e.
// x -> (-1)^m a x reversion(a); both variants preserve the norm.
Multivector pin_apply(const SpinElement& a, const Multivector& x, bool use_sign_twist = false);

}  // namespace cla
