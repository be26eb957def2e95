#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <vector>

namespace cla {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Multivariate polynomial over Q in variables x_0..x_{nvars-1}. Terms are
// kept in a map ordered lexicographically by exponent tuple, so the
// representation is canonical and the largest term is a well-defined leading
// term for division.
class Polynomial {
public:
    using Expo = std::vector<unsigned>;

    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rational& c);
    static Polynomial variable(int nvars, int i);
    static Polynomial monomial(int nvars, Expo e, const Rational& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    // -1 for the zero polynomial.
    int total_degree() const;
    const std::map<Expo, Rational>& terms() const { return terms_; }

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    Polynomial operator-() const;

    Polynomial partial(int axis) const;

    Rational eval(const std::vector<Rational>& x) const;
    double eval_double(const std::vector<double>& x) const;

    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }

    // True iff all terms share one total degree; degree_out then receives it
    // (0 for the zero polynomial).
    bool is_homogeneous(int& degree_out) const;

private:
    void add_term(Expo e, const Rational& c);
    int nvars_;
    std::map<Expo, Rational> terms_;
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool try_divide(const Polynomial& f, const Polynomial& g, Polynomial& q);
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(Polynomial a, const Rational& c);

// Exact division: if g | f, sets q with f = q*g and returns true. Uses
// lexicographic division by the single divisor g; the remainder vanishes
// precisely when f lies in the ideal (g), so the test is exact.
bool try_divide(const Polynomial& f, const Polynomial& g, Polynomial& q);

// sum_i x_i^2, the squared-radius polynomial all denominators are powers of.
Polynomial radius_squared(int nvars);

}  // namespace cla
