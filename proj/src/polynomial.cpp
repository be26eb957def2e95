#include "cla/polynomial.hpp"

#include <stdexcept>

namespace cla {

Polynomial Polynomial::constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Expo(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
    if (i < 0 || i >= nvars) throw std::invalid_argument("variable index out of range");
    Polynomial p(nvars);
    Expo e(nvars, 0);
    e[i] = 1;
    p.add_term(std::move(e), 1);
    return p;
}

Polynomial Polynomial::monomial(int nvars, Expo e, const Rational& c) {
    if (static_cast<int>(e.size()) != nvars)
        throw std::invalid_argument("exponent tuple length mismatch");
    Polynomial p(nvars);
    p.add_term(std::move(e), c);
    return p;
}

int Polynomial::total_degree() const {
    int deg = -1;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (unsigned k : e) d += static_cast<int>(k);
        if (d > deg) deg = d;
    }
    return deg;
}

void Polynomial::add_term(Expo e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(std::move(e), c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (nvars_ != o.nvars_) throw std::invalid_argument("nvars mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (nvars_ != o.nvars_) throw std::invalid_argument("nvars mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& [e, v] : r.terms_) v = -v;
    return r;
}

Polynomial Polynomial::partial(int axis) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[axis] == 0) continue;
        Expo d = e;
        d[axis] -= 1;
        r.add_term(std::move(d), c * e[axis]);
    }
    return r;
}

Rational Polynomial::eval(const std::vector<Rational>& x) const {
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
        acc += t;
    }
    return acc;
}

double Polynomial::eval_double(const std::vector<double>& x) const {
    double acc = 0;
    for (const auto& [e, c] : terms_) {
        double t = static_cast<double>(c);
        for (int i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
        acc += t;
    }
    return acc;
}

bool Polynomial::is_homogeneous(int& degree_out) const {
    degree_out = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (unsigned k : e) d += static_cast<int>(k);
        if (first) {
            degree_out = d;
            first = false;
        } else if (d != degree_out) {
            return false;
        }
    }
    return true;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("nvars mismatch");
    Polynomial r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Polynomial::Expo e(a.nvars_);
            for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(std::move(e), ca * cb);
        }
    return r;
}

bool try_divide(const Polynomial& f, const Polynomial& g, Polynomial& q) {
    if (f.nvars_ != g.nvars_) throw std::invalid_argument("nvars mismatch");
    if (g.is_zero()) throw std::invalid_argument("division by zero polynomial");
    q = Polynomial(f.nvars_);
    Polynomial r = f;
    const auto& glead = *g.terms_.rbegin();
    while (!r.is_zero()) {
        const auto& rlead = *r.terms_.rbegin();
        Polynomial::Expo quot(f.nvars_);
        for (int i = 0; i < f.nvars_; ++i) {
            if (rlead.first[i] < glead.first[i]) return false;
            quot[i] = rlead.first[i] - glead.first[i];
        }
        const Rational coeff = rlead.second / glead.second;
        Polynomial t = Polynomial::monomial(f.nvars_, std::move(quot), coeff);
        q += t;
        r -= t * g;
    }
    return true;
}

Polynomial radius_squared(int nvars) {
    Polynomial r(nvars);
    for (int i = 0; i < nvars; ++i) {
        Polynomial::Expo e(nvars, 0);
        e[i] = 2;
        r += Polynomial::monomial(nvars, std::move(e), 1);
    }
    return r;
}

}  // namespace cla
