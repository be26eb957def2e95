#pragma once

#include <functional>

#include "cla/multivector.hpp"

namespace cla {

// The two first-order operators used throughout, behind one flag:
//   Vector:        D f = sum_j e_j d f / d x_j          on R^n
//   CauchyRiemann: D f = d f / d x_0 + sum_j e_j d f / d x_j   on R + R^n
// For Vector the evaluation point has n coordinates (x_1..x_n); for
// CauchyRiemann it has n+1 coordinates (x_0..x_n).
enum class DiracVariant { Vector, CauchyRiemann };

using FieldFn = std::function<Multivector(const std::vector<double>&)>;

// Central-difference application, O(h^2): each partial is
// (f(x + h e_i) - f(x - h e_i)) / (2h).
Multivector dirac_apply_fd(const FieldFn& f, const std::vector<double>& x, double h,
                           DiracVariant variant);

// Conjugated CauchyRiemann operator d f / d x_0 - sum_j e_j d f / d x_j.
// Composing it with dirac_apply_fd (either order) gives the Laplacian.
Multivector dirac_conj_apply_fd(const FieldFn& f, const std::vector<double>& x, double h);

// D(Df) by nesting the central-difference operator. Exact (up to rounding)
// on polynomials of degree <= 2, where it equals -Laplacian f for the
// Vector variant.
Multivector dirac_squared_fd(const FieldFn& f, const std::vector<double>& x, double h,
                             DiracVariant variant);

// Central-difference Laplacian, for cross-checks against dirac_squared_fd.
Multivector laplacian_fd(const FieldFn& f, const std::vector<double>& x, double h);

}  // namespace cla
