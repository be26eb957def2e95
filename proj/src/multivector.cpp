#include "cla/multivector.hpp"

#include <bit>
#include <cmath>

namespace cla {

int blade_reorder_sign(std::uint32_t a, std::uint32_t b) {
    // Count transpositions needed to interleave the generators of b into a.
    int swaps = 0;
    a >>= 1;
    while (a != 0) {
        swaps += std::popcount(a & b);
        a >>= 1;
    }
    return (swaps & 1) ? -1 : 1;
}

int blade_product_sign(std::uint32_t a, std::uint32_t b) {
    int sign = blade_reorder_sign(a, b);
    // Each shared generator contracts with e_i^2 = -1.
    if (std::popcount(a & b) & 1) sign = -sign;
    return sign;
}

Multivector::Multivector(int dim) : dim_(dim) {
    if (dim < 1 || dim > 12)
        throw std::invalid_argument("Multivector: dimension must be in [1, 12]");
    coeffs_.assign(std::size_t{1} << dim, 0.0);
}

Multivector Multivector::scalar(int dim, double value) {
    Multivector m(dim);
    m.coeffs_[0] = value;
    return m;
}

Multivector Multivector::blade(int dim, std::uint32_t mask, double value) {
    Multivector m(dim);
    if (mask >= m.coeffs_.size())
        throw std::invalid_argument("Multivector::blade: mask out of range");
    m.coeffs_[mask] = value;
    return m;
}

Multivector Multivector::basis(int dim, int i) {
    if (i < 1 || i > dim)
        throw std::invalid_argument("Multivector::basis: index out of range");
    return blade(dim, std::uint32_t{1} << (i - 1), 1.0);
}

Multivector& Multivector::operator+=(const Multivector& other) {
    if (dim_ != other.dim_) throw std::invalid_argument("Multivector: dimension mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
    if (dim_ != other.dim_) throw std::invalid_argument("Multivector: dimension mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

Multivector& Multivector::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

Multivector Multivector::operator-() const {
    Multivector r(*this);
    for (double& c : r.coeffs_) c = -c;
    return r;
}

double Multivector::norm_sq() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return s;
}

double Multivector::norm() const { return std::sqrt(norm_sq()); }

bool Multivector::is_zero(double tol) const {
    for (double c : coeffs_)
        if (std::abs(c) > tol) return false;
    return true;
}

Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
Multivector operator*(Multivector a, double s) { return a *= s; }
Multivector operator*(double s, Multivector a) { return a *= s; }

Multivector operator*(const Multivector& a, const Multivector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("Multivector: dimension mismatch");
    Multivector out(a.dim());
    const std::size_t sz = a.size();
    for (std::uint32_t i = 0; i < sz; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (std::uint32_t j = 0; j < sz; ++j) {
            const double bj = b[j];
            if (bj == 0.0) continue;
            out[i ^ j] += blade_product_sign(i, j) * ai * bj;
        }
    }
    return out;
}

namespace {

Multivector grade_scaled(const Multivector& a, int (*sign_of_grade)(int)) {
    Multivector r(a.dim());
    for (std::uint32_t m = 0; m < a.size(); ++m) {
        const int k = std::popcount(m);
        r[m] = sign_of_grade(k) * a[m];
    }
    return r;
}

}  // namespace

Multivector reversion(const Multivector& a) {
    return grade_scaled(a, [](int k) { return (k * (k - 1) / 2) % 2 ? -1 : 1; });
}

Multivector conjugation(const Multivector& a) {
    return grade_scaled(a, [](int k) { return (k * (k + 1) / 2) % 2 ? -1 : 1; });
}

Multivector grade_involution(const Multivector& a) {
    return grade_scaled(a, [](int k) { return k % 2 ? -1 : 1; });
}

double scalar_part(const Multivector& a) { return a[0]; }

Multivector grade_part(const Multivector& a, int k) {
    Multivector r(a.dim());
    for (std::uint32_t m = 0; m < a.size(); ++m)
        if (std::popcount(m) == k) r[m] = a[m];
    return r;
}

double non_paravector_residue(const Multivector& a) {
    double res = 0.0;
    for (std::uint32_t m = 0; m < a.size(); ++m)
        if (std::popcount(m) > 1) res = std::max(res, std::abs(a[m]));
    return res;
}

Multivector vector_inverse(const Multivector& x, double tol) {
    double nsq = 0.0;
    for (std::uint32_t m = 0; m < x.size(); ++m) {
        const int k = std::popcount(m);
        if (k != 1 && std::abs(x[m]) > tol)
            throw std::invalid_argument("vector_inverse: argument is not grade-1");
        if (k == 1) nsq += x[m] * x[m];
    }
    if (nsq == 0.0) throw pole_error("vector_inverse: zero vector");
    Multivector r(x.dim());
    for (std::uint32_t m = 0; m < x.size(); ++m)
        if (std::popcount(m) == 1) r[m] = -x[m] / nsq;
    return r;
}

Multivector paravector_product_inverse(const Multivector& w, double tol) {
    const Multivector wb = conjugation(w);
    const Multivector prod = w * wb;
    const double sc = scalar_part(prod);
    const double nsq = w.norm_sq();
    if (!(sc > 0.0) || nsq == 0.0)
        throw pole_error("paravector_product_inverse: singular element");
    Multivector rest = prod;
    rest[0] = 0.0;
    if (rest.norm() > tol * nsq)
        throw std::invalid_argument(
            "paravector_product_inverse: w * conj(w) is not scalar; "
            "w is not a product of paravectors");
    return wb * (1.0 / sc);
}

Paravector Paravector::from_point(const std::vector<double>& p) {
    if (p.empty()) throw std::invalid_argument("Paravector: empty point");
    return Paravector(p[0], std::vector<double>(p.begin() + 1, p.end()));
}

std::vector<double> Paravector::to_point() const {
    std::vector<double> p(vec_.size() + 1);
    p[0] = x0_;
    for (std::size_t i = 0; i < vec_.size(); ++i) p[i + 1] = vec_[i];
    return p;
}

Multivector Paravector::embed() const {
    Multivector m(n() >= 1 ? n() : 1);
    m[0] = x0_;
    for (int i = 0; i < n(); ++i) m[std::uint32_t{1} << i] = vec_[i];
    return m;
}

double Paravector::norm_sq() const {
    double s = x0_ * x0_;
    for (double v : vec_) s += v * v;
    return s;
}

double Paravector::norm() const { return std::sqrt(norm_sq()); }

Paravector Paravector::conj() const {
    Paravector r(*this);
    for (double& v : r.vec_) v = -v;
    return r;
}

Paravector Paravector::inverse(double tol) const {
    const double nsq = norm_sq();
    if (nsq <= tol) throw pole_error("Paravector::inverse: zero paravector");
    Paravector r = conj();
    r *= 1.0 / nsq;
    return r;
}

Paravector& Paravector::operator+=(const Paravector& o) {
    if (n() != o.n()) throw std::invalid_argument("Paravector: dimension mismatch");
    x0_ += o.x0_;
    for (int i = 0; i < n(); ++i) vec_[i] += o.vec_[i];
    return *this;
}

Paravector& Paravector::operator-=(const Paravector& o) {
    if (n() != o.n()) throw std::invalid_argument("Paravector: dimension mismatch");
    x0_ -= o.x0_;
    for (int i = 0; i < n(); ++i) vec_[i] -= o.vec_[i];
    return *this;
}

Paravector& Paravector::operator*=(double s) {
    x0_ *= s;
    for (double& v : vec_) v *= s;
    return *this;
}

Paravector operator+(Paravector a, const Paravector& b) { return a += b; }
Paravector operator-(Paravector a, const Paravector& b) { return a -= b; }
Paravector operator*(Paravector a, double s) { return a *= s; }

Paravector to_paravector(const Multivector& a, double tol) {
    if (non_paravector_residue(a) > tol * (1.0 + a.norm()))
        throw std::invalid_argument("to_paravector: residue outside grades 0/1");
    Paravector p(a.dim());
    p.x0() = a[0];
    for (int i = 0; i < a.dim(); ++i) p.vec()[i] = a[std::uint32_t{1} << i];
    return p;
}

}  // namespace cla
