#include "cla/kernel_function.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace cla {

void RationalVectorFunction::set_numerator(std::uint32_t blade, Polynomial p) {
    if (p.nvars() != ambient_dim_)
        throw std::invalid_argument("numerator variable count mismatch");
    if (p.is_zero())
        numerators_.erase(blade);
    else
        numerators_.insert_or_assign(blade, std::move(p));
}

void RationalVectorFunction::add_numerator(std::uint32_t blade, const Polynomial& p) {
    if (p.nvars() != ambient_dim_)
        throw std::invalid_argument("numerator variable count mismatch");
    auto it = numerators_.find(blade);
    if (it == numerators_.end()) {
        if (!p.is_zero()) numerators_.emplace(blade, p);
        return;
    }
    it->second += p;
    if (it->second.is_zero()) numerators_.erase(it);
}

void RationalVectorFunction::canonicalize() {
    for (auto it = numerators_.begin(); it != numerators_.end();) {
        if (it->second.is_zero())
            it = numerators_.erase(it);
        else
            ++it;
    }
    if (numerators_.empty()) {
        denom_exp_ = 0;
        return;
    }
    const Polynomial r2 = radius_squared(ambient_dim_);
    while (denom_exp_ >= 2) {
        std::map<std::uint32_t, Polynomial> reduced;
        bool all = true;
        for (const auto& [blade, num] : numerators_) {
            Polynomial q(ambient_dim_);
            if (!try_divide(num, r2, q)) {
                all = false;
                break;
            }
            reduced.emplace(blade, std::move(q));
        }
        if (!all) break;
        numerators_ = std::move(reduced);
        denom_exp_ -= 2;
    }
}

int RationalVectorFunction::numerator_degree() const {
    int deg = 0;
    bool first = true;
    for (const auto& [blade, num] : numerators_) {
        int d;
        if (!num.is_homogeneous(d))
            throw std::logic_error("inhomogeneous numerator component");
        if (first) {
            deg = d;
            first = false;
        } else if (d != deg) {
            throw std::logic_error("blade components of different degrees");
        }
    }
    return deg;
}

RationalVectorFunction cauchy_kernel_q0(int ambient_dim) {
    if (ambient_dim < 2) throw std::invalid_argument("ambient dimension must be >= 2");
    RationalVectorFunction f(ambient_dim);
    f.set_denom_exp(static_cast<unsigned>(ambient_dim));
    f.set_numerator(0, Polynomial::variable(ambient_dim, 0));
    for (int i = 1; i < ambient_dim; ++i)
        f.set_numerator(1u << (i - 1), -Polynomial::variable(ambient_dim, i));
    return f;
}

namespace {

RationalVectorFunction partial_impl(const RationalVectorFunction& f, int axis,
                                    bool canonical) {
    if (axis < 0 || axis >= f.ambient_dim())
        throw std::invalid_argument("axis out of range");
    RationalVectorFunction out(f.ambient_dim());
    const Polynomial r2 = radius_squared(f.ambient_dim());
    const Polynomial xa = Polynomial::variable(f.ambient_dim(), axis);
    const Rational k = f.denom_exp();
    for (const auto& [blade, num] : f.numerators()) {
        if (k == 0) {
            out.set_numerator(blade, num.partial(axis));
        } else {
            out.set_numerator(blade, num.partial(axis) * r2 - xa * num * k);
        }
    }
    out.set_denom_exp(f.denom_exp() == 0 ? 0 : f.denom_exp() + 2);
    if (canonical) out.canonicalize();
    return out;
}

}  // namespace

RationalVectorFunction symbolic_partial(const RationalVectorFunction& f, int axis) {
    return partial_impl(f, axis, true);
}

RationalVectorFunction q_m(int ambient_dim, const MultiIndex& m) {
    if (static_cast<int>(m.size()) != ambient_dim)
        throw std::invalid_argument("multi-index length must equal ambient dimension");
    RationalVectorFunction f = cauchy_kernel_q0(ambient_dim);
    for (int axis = 0; axis < ambient_dim; ++axis)
        for (unsigned k = 0; k < m[axis]; ++k) f = symbolic_partial(f, axis);
    return f;
}

RationalVectorFunction dirac_apply_symbolic(const RationalVectorFunction& f,
                                            DiracVariant variant) {
    RationalVectorFunction out(f.ambient_dim());
    const int n = f.clifford_dim();
    // uncanonicalized partials share the denominator exponent denom_exp + 2
    out.set_denom_exp(f.denom_exp() == 0 ? 0 : f.denom_exp() + 2);
    if (variant == DiracVariant::CauchyRiemann) {
        RationalVectorFunction d0 = partial_impl(f, 0, false);
        for (const auto& [blade, num] : d0.numerators()) out.add_numerator(blade, num);
    }
    for (int j = 1; j <= n; ++j) {
        RationalVectorFunction dj = partial_impl(f, j, false);
        const std::uint32_t ej = 1u << (j - 1);
        for (const auto& [blade, num] : dj.numerators()) {
            const int sign = blade_product_sign(ej, blade);
            out.add_numerator(ej ^ blade, sign > 0 ? num : -num);
        }
    }
    if (out.is_zero()) out.set_denom_exp(0);
    out.canonicalize();
    return out;
}

Multivector evaluate(const RationalVectorFunction& f, const std::vector<double>& x,
                     double tol) {
    if (static_cast<int>(x.size()) != f.ambient_dim())
        throw std::invalid_argument("evaluation point dimension mismatch");
    double nsq = 0.0;
    for (double c : x) nsq += c * c;
    if (f.denom_exp() > 0 && nsq < tol * tol)
        throw pole_error("kernel evaluation at the origin");
    Multivector out(f.clifford_dim());
    const double scale =
        f.denom_exp() == 0 ? 1.0 : std::pow(nsq, -0.5 * static_cast<double>(f.denom_exp()));
    for (const auto& [blade, num] : f.numerators())
        out[blade] = num.eval_double(x) * scale;
    return out;
}

std::map<std::uint32_t, Rational> evaluate_numerators(const RationalVectorFunction& f,
                                                      const std::vector<Rational>& x) {
    std::map<std::uint32_t, Rational> out;
    for (const auto& [blade, num] : f.numerators()) out[blade] = num.eval(x);
    return out;
}

std::string kernel_to_json(const RationalVectorFunction& f) {
    nlohmann::json doc;
    doc["ambient_dim"] = f.ambient_dim();
    doc["denom_exp"] = f.denom_exp();
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& [blade, num] : f.numerators()) {
        nlohmann::json c;
        c["blade"] = blade;
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [e, coeff] : num.terms()) {
            nlohmann::json t = nlohmann::json::array();
            t.push_back(e);
            t.push_back(boost::multiprecision::numerator(coeff).str());
            t.push_back(boost::multiprecision::denominator(coeff).str());
            terms.push_back(std::move(t));
        }
        c["terms"] = std::move(terms);
        comps.push_back(std::move(c));
    }
    doc["components"] = std::move(comps);
    return doc.dump(2);
}

RationalVectorFunction kernel_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    for (const auto& [key, val] : doc.items())
        if (key != "ambient_dim" && key != "denom_exp" && key != "components")
            throw std::invalid_argument("unknown key in kernel document: " + key);
    const int ambient = doc.at("ambient_dim").get<int>();
    RationalVectorFunction f(ambient);
    f.set_denom_exp(doc.at("denom_exp").get<unsigned>());
    for (const auto& comp : doc.at("components")) {
        for (const auto& [key, val] : comp.items())
            if (key != "blade" && key != "terms")
                throw std::invalid_argument("unknown key in kernel component: " + key);
        const std::uint32_t blade = comp.at("blade").get<std::uint32_t>();
        Polynomial num(ambient);
        for (const auto& t : comp.at("terms")) {
            if (!t.is_array() || t.size() != 3)
                throw std::invalid_argument("kernel term must be [exps, num, den]");
            Polynomial::Expo e = t[0].get<Polynomial::Expo>();
            const Int nu(t[1].get<std::string>());
            const Int de(t[2].get<std::string>());
            if (de == 0) throw std::invalid_argument("zero denominator in kernel term");
            num += Polynomial::monomial(ambient, std::move(e), Rational(nu, de));
        }
        f.set_numerator(blade, std::move(num));
    }
    f.canonicalize();
    return f;
}

Multivector CompiledKernel::eval(const std::vector<double>& x) const {
    Multivector out(ambient_dim - 1);
    double nsq = 0.0;
    for (double c : x) nsq += c * c;
    const double scale =
        denom_exp == 0 ? 1.0 : std::pow(nsq, -0.5 * static_cast<double>(denom_exp));
    for (const Term& t : terms) {
        double v = t.coeff;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (unsigned k = 0; k < t.exps[i]; ++k) v *= x[i];
        out[t.blade] += v;
    }
    if (scale != 1.0) out *= scale;
    return out;
}

CompiledKernel compile(const RationalVectorFunction& f) {
    CompiledKernel ck;
    ck.ambient_dim = f.ambient_dim();
    ck.denom_exp = f.denom_exp();
    ck.numerator_degree = f.numerator_degree();
    double bound_sq = 0.0;
    for (const auto& [blade, num] : f.numerators()) {
        double abs_sum = 0.0;
        for (const auto& [e, c] : num.terms()) {
            const double cd = static_cast<double>(c);
            abs_sum += std::abs(cd);
            ck.terms.push_back({blade, e, cd});
        }
        bound_sq += abs_sum * abs_sum;
    }
    ck.coeff_bound = std::sqrt(bound_sq);
    return ck;
}

}  // namespace cla
