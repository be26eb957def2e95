#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cla {

// Thrown when an evaluation point hits (or gets too close to) a kernel
// singularity or a Moebius pole.
struct pole_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a linear system stays singular after regularization.
struct conditioning_error : std::runtime_error {
    explicit conditioning_error(const std::string& msg, double cond_estimate)
        : std::runtime_error(msg), condition_estimate(cond_estimate) {}
    double condition_estimate;
};

// Sign of e_A * e_B from moving the generators of B into canonical position
// past those of A: (-1)^(number of transpositions). Does not include the
// metric contractions.
int blade_reorder_sign(std::uint32_t a, std::uint32_t b);

// Full product sign for e_A * e_B in Cl_n (e_i^2 = -1): reorder sign times
// (-1)^|A & B|. The resulting blade index is A ^ B.
int blade_product_sign(std::uint32_t a, std::uint32_t b);

// Element of the real Clifford algebra Cl_n, 2 <= n <= 12 permitted (n = 1
// degenerates to the complex numbers and is allowed too). Coefficients are
// stored densely over the 2^n blade basis; blade index is a bitmask with
// bit i-1 set iff e_i is a factor, index 0 is the scalar.
class Multivector {
public:
    Multivector() : dim_(0) {}
    explicit Multivector(int dim);

    static Multivector scalar(int dim, double value);
    static Multivector blade(int dim, std::uint32_t mask, double value = 1.0);
    static Multivector basis(int dim, int i);  // e_i, 1-based

    int dim() const { return dim_; }
    std::size_t size() const { return coeffs_.size(); }

    double operator[](std::uint32_t mask) const { return coeffs_[mask]; }
    double& operator[](std::uint32_t mask) { return coeffs_[mask]; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }

    Multivector& operator+=(const Multivector& other);
    Multivector& operator-=(const Multivector& other);
    Multivector& operator*=(double s);

    Multivector operator-() const;

    // Frobenius norm of the coefficient vector. For products of paravectors
    // this coincides with the multiplicative norm |w| with w * conj(w) = |w|^2.
    double norm() const;
    double norm_sq() const;

    bool is_zero(double tol = 0.0) const;

private:
    int dim_;
    std::vector<double> coeffs_;
};

Multivector operator+(Multivector a, const Multivector& b);
Multivector operator-(Multivector a, const Multivector& b);
Multivector operator*(Multivector a, double s);
Multivector operator*(double s, Multivector a);

// Geometric (Clifford) product. Throws std::invalid_argument on dimension
// mismatch.
Multivector operator*(const Multivector& a, const Multivector& b);

// Reversion: grade-k blade scaled by (-1)^(k(k-1)/2). Anti-automorphism with
// reversion(e_j) = e_j.
Multivector reversion(const Multivector& a);

// Conjugation: grade-k blade scaled by (-1)^(k(k+1)/2). Anti-automorphism
// with conjugation(e_j) = -e_j.
Multivector conjugation(const Multivector& a);

// Grade involution (main involution): grade-k blade scaled by (-1)^k.
// This is an algebra automorphism; it exchanges the two Dirac operator
// variants on R + R^n.
Multivector grade_involution(const Multivector& a);

double scalar_part(const Multivector& a);

// Projection onto grade-k part.
Multivector grade_part(const Multivector& a, int k);

// Largest coefficient magnitude outside grades 0 and 1.
double non_paravector_residue(const Multivector& a);

// Inverse of a nonzero grade-1 vector: x^{-1} = -x / |x|^2. Throws
// std::invalid_argument if x has non-vector components, pole_error at zero.
Multivector vector_inverse(const Multivector& x, double tol = 1e-12);

// Inverse of a product of paravectors: w^{-1} = conj(w) / Sc(w conj(w)).
// Valid whenever w conj(w) is a positive scalar; this covers every entry
// and every denominator cx+d arising from Vahlen matrices. Throws
// pole_error when w is (numerically) zero, std::invalid_argument when
// w conj(w) has a non-scalar residue above tol * |w|^2.
Multivector paravector_product_inverse(const Multivector& w, double tol = 1e-9);

// Scalar plus vector part of R + R^n, the arithmetic home of all evaluation
// points. Embeds into Cl_n with only grade-0/1 coefficients nonzero.
class Paravector {
public:
    Paravector() : x0_(0) {}
    explicit Paravector(int n) : x0_(0), vec_(n, 0.0) {}
    Paravector(double x0, std::vector<double> vec) : x0_(x0), vec_(std::move(vec)) {}

    // From ambient coordinates (x_0, x_1, ..., x_n).
    static Paravector from_point(const std::vector<double>& p);

    int n() const { return static_cast<int>(vec_.size()); }
    int ambient_dim() const { return n() + 1; }

    double x0() const { return x0_; }
    double& x0() { return x0_; }
    const std::vector<double>& vec() const { return vec_; }
    std::vector<double>& vec() { return vec_; }

    // Component i of the ambient point, i = 0..n.
    double component(int i) const { return i == 0 ? x0_ : vec_[i - 1]; }

    std::vector<double> to_point() const;
    Multivector embed() const;

    double norm_sq() const;
    double norm() const;

    Paravector conj() const;

    // x^{-1} = conj(x) / |x|^2; throws pole_error at zero.
    Paravector inverse(double tol = 1e-300) const;

    Paravector& operator+=(const Paravector& o);
    Paravector& operator-=(const Paravector& o);
    Paravector& operator*=(double s);

private:
    double x0_;
    std::vector<double> vec_;
};

Paravector operator+(Paravector a, const Paravector& b);
Paravector operator-(Paravector a, const Paravector& b);
Paravector operator*(Paravector a, double s);

// Nearest paravector to a general multivector. If the residue outside
// grades 0/1 exceeds tol * (1 + |a|), throws std::invalid_argument.
Paravector to_paravector(const Multivector& a, double tol = 1e-9);

}  // namespace cla
