#include "cla/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cla {

namespace {

// Per-coefficient compensated accumulation; merge order is fixed by the
// callers, so sums are reproducible.
struct KahanMV {
    Multivector sum, comp;
    explicit KahanMV(int dim) : sum(dim), comp(dim) {}
    void add(const Multivector& t) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            const double y = t[i] - comp[i];
            const double v = sum[i] + y;
            comp[i] = (v - sum[i]) - y;
            sum[i] = v;
        }
    }
};

// Evaluates terms[i] = f(i) for i < count, in parallel unless deterministic.
// Exceptions may not escape an OpenMP region, so the parallel path captures
// the first one and rethrows afterwards.
template <typename TermFn>
std::vector<Multivector> evaluate_terms(long count, bool deterministic,
                                        const TermFn& f) {
    std::vector<Multivector> terms(static_cast<std::size_t>(count));
    if (deterministic) {
        for (long i = 0; i < count; ++i) terms[static_cast<std::size_t>(i)] = f(i);
        return terms;
    }
    std::exception_ptr err;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < count; ++i) {
        try {
            terms[static_cast<std::size_t>(i)] = f(i);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(cla_series_err)
#endif
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return terms;
}

template <typename TermFn>
Multivector sum_terms(long count, int dim, bool deterministic, const TermFn& f) {
    const auto terms = evaluate_terms(count, deterministic, f);
    KahanMV acc(dim);
    for (const Multivector& t : terms) acc.add(t);
    return acc.sum;
}

double sphere_area(int r) {
    // surface area of the unit sphere in R^r
    return 2.0 * std::pow(M_PI, 0.5 * r) / std::tgamma(0.5 * r);
}

double lattice_tail_bound(const CompiledKernel& ck, const Lattice& lat, double R,
                          const std::vector<double>& shift) {
    const int r = lat.rank();
    if (r == 0) return 0.0;
    const int s = -ck.homogeneity();
    if (s <= r) return std::numeric_limits<double>::infinity();
    const double mu = lat.covering_radius_bound();
    const auto par = lat.project_to_span(shift);
    double rho_sq = 0.0;
    for (double c : par) rho_sq += c * c;
    const double rho = std::sqrt(rho_sq);
    const double r_eff = R - 2.0 * mu - rho;
    if (r_eff <= 0.0) return std::numeric_limits<double>::infinity();
    const double beta = std::pow(1.0 + (mu + rho) / r_eff, r - 1);
    return ck.coeff_bound * sphere_area(r) * beta * std::pow(r_eff, r - s) /
           ((s - r) * lat.covolume());
}

// sign = nullptr for the untwisted series.
SeriesResult lattice_series_impl(const CompiledKernel& ck, const Lattice& lat,
                                 const std::vector<double>& shift, double R,
                                 const BundleCharacter* character,
                                 const SeriesOptions& opts) {
    const auto points = lattice_points_in_ball(lat, R);
    const int dim = ck.ambient_dim - 1;
    std::vector<double> arg(shift.size());
    for (const auto& lp : points) {
        double nsq = 0.0;
        for (std::size_t j = 0; j < shift.size(); ++j) {
            const double c = shift[j] + lp.point[j];
            nsq += c * c;
        }
        if (nsq < 1e-18) throw pole_error("series evaluation point hits a lattice pole");
    }
    const long count = static_cast<long>(points.size());
    Multivector value = sum_terms(count, dim, opts.deterministic, [&](long i) {
        const auto& lp = points[static_cast<std::size_t>(i)];
        std::vector<double> y(shift.size());
        for (std::size_t j = 0; j < shift.size(); ++j) y[j] = shift[j] + lp.point[j];
        Multivector t = ck.eval(y);
        if (character) {
            long parity = 0;
            for (int b = 0; b <= character->l; ++b) parity += lp.coords[b];
            if (parity % 2 != 0) t = -t;
        }
        return t;
    });
    SeriesResult res;
    res.value = std::move(value);
    res.truncation_radius = R;
    res.tail_bound = lattice_tail_bound(ck, lat, R, shift);
    res.terms_summed = count;
    return res;
}

}  // namespace

SeriesResult eisenstein_epsilon(const MultiIndex& m, const Lattice& lat,
                                const std::vector<double>& x, double R,
                                const SeriesOptions& opts) {
    if (static_cast<int>(m.size()) != lat.ambient_dim())
        throw std::invalid_argument("multi-index length must equal ambient dimension");
    if (static_cast<int>(x.size()) != lat.ambient_dim())
        throw std::invalid_argument("point dimension mismatch");
    if (static_cast<int>(multi_index_order(m)) < lat.rank() + 1)
        throw std::domain_error("series requires |m| >= rank + 1");
    return lattice_series_impl(compile(q_m(lat.ambient_dim(), m)), lat, x, R, nullptr,
                               opts);
}

SeriesResult eisenstein_twisted(const MultiIndex& m, const Lattice& lat,
                                const BundleCharacter& character,
                                const std::vector<double>& x, double R,
                                const SeriesOptions& opts) {
    if (static_cast<int>(m.size()) != lat.ambient_dim())
        throw std::invalid_argument("multi-index length must equal ambient dimension");
    if (static_cast<int>(x.size()) != lat.ambient_dim())
        throw std::invalid_argument("point dimension mismatch");
    if (static_cast<int>(multi_index_order(m)) < lat.rank() + 1)
        throw std::domain_error("series requires |m| >= rank + 1");
    if (character.l < 0 || character.l >= lat.rank())
        throw std::invalid_argument("character split index out of range");
    return lattice_series_impl(compile(q_m(lat.ambient_dim(), m)), lat, x, R, &character,
                               opts);
}

SeriesResult torus_cauchy_kernel(const Lattice& lat, const std::vector<double>& x,
                                 const std::vector<double>& y, double R,
                                 const SeriesOptions& opts) {
    const int n = lat.ambient_dim() - 1;
    if (lat.rank() > n - 1)
        throw std::domain_error(
            "torus kernel needs rank <= n - 1; higher ranks need convergence "
            "corrections that are not provided");
    if (x.size() != y.size() || static_cast<int>(x.size()) != lat.ambient_dim())
        throw std::invalid_argument("point dimension mismatch");
    std::vector<double> shift(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) shift[i] = x[i] - y[i];
    return lattice_series_impl(compile(cauchy_kernel_q0(lat.ambient_dim())), lat, shift,
                               R, nullptr, opts);
}

namespace {

// q_0 evaluated on a (numerically) paravector Clifford element.
Multivector q0_of(const Multivector& w, int n) {
    const double nsq = w.norm_sq();
    if (nsq < 1e-18) throw pole_error("q_0 evaluated at zero");
    return conjugation(w) * std::pow(nsq, -0.5 * (n + 1));
}

Multivector q0_of(const Paravector& w) {
    const double nsq = w.norm_sq();
    if (nsq < 1e-18) throw pole_error("q_0 evaluated at zero");
    return w.conj().embed() * std::pow(nsq, -0.5 * (w.n() + 1));
}

using Key = std::vector<long long>;

Key row_key(const VahlenMatrix& m) {
    Key k;
    for (const Multivector* e : {&m.c, &m.d})
        for (std::size_t i = 0; i < e->size(); ++i)
            k.push_back(std::llround((*e)[i] * 1e6));
    return k;
}

Key full_key(const VahlenMatrix& m) {
    Key k;
    for (const Multivector* e : {&m.a, &m.b, &m.c, &m.d})
        for (std::size_t i = 0; i < e->size(); ++i)
            k.push_back(std::llround((*e)[i] * 1e6));
    return k;
}

// Elements of the level-N congruence subgroup within the row-norm bound,
// optionally deduplicated to translation-coset representatives via the
// bottom row (valid for N >= 3; at N = 2 rows determine cosets only up to
// sign, and the series vanish identically there anyway because -I is a
// level-2 element). Results are cached per parameter set; the element order
// (row norm, row, full entry key) is deterministic.
const std::vector<GroupWord>& congruence_elements(int n, int p, int N, double norm_bound,
                                                  const SeriesOptions& opts,
                                                  bool coset_dedup) {
    using CacheKey = std::tuple<int, int, int, long, int, long, bool>;
    static std::map<CacheKey, std::vector<GroupWord>> cache;
    static std::mutex mu;
    const CacheKey key{n,
                       p,
                       N,
                       std::lround(norm_bound * 1e3),
                       opts.max_word_length,
                       std::lround(opts.expand_slack * 1e3),
                       coset_dedup};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    EnumOptions eo;
    eo.max_word_length = opts.max_word_length;
    eo.norm_bound = norm_bound;
    eo.expand_slack = opts.expand_slack;
    eo.pm_quotient = false;
    auto words = enumerate_group(gamma_p_generators(n, p), eo);
    words = filter_congruence(words, N, p);
    std::sort(words.begin(), words.end(), [](const GroupWord& a, const GroupWord& b) {
        const double na = bottom_row_norm_sq(a.matrix);
        const double nb = bottom_row_norm_sq(b.matrix);
        if (na != nb) return na < nb;
        const Key ra = row_key(a.matrix), rb = row_key(b.matrix);
        if (ra != rb) return ra < rb;
        return full_key(a.matrix) < full_key(b.matrix);
    });
    if (coset_dedup) {
        std::vector<GroupWord> reps;
        Key last;
        bool have_last = false;
        for (auto& gw : words) {
            Key rk = row_key(gw.matrix);
            if (have_last && rk == last) continue;
            // rows are sorted, so equal rows are adjacent only within one
            // norm class; compare against all kept reps to be safe
            bool dup = false;
            for (const auto& kept : reps)
                if (row_key(kept.matrix) == rk) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            last = std::move(rk);
            have_last = true;
            reps.push_back(std::move(gw));
        }
        words = std::move(reps);
    }
    auto [pos, inserted] = cache.emplace(key, std::move(words));
    return pos->second;
}

// Empirical shell estimator for the hyperbolic families: twice the absolute
// mass of the outer shell (row norms in (bound/4, bound]) plus twice its
// largest term. The counting function of these groups admits no usable
// comparison integral at small sigma, so this is calibrated
// self-consistency, not a certificate.
struct HypAccumulated {
    Multivector full;
    double outer_mass = 0.0;
    double max_outer = 0.0;
    long count = 0;
};

template <typename TermFn>
HypAccumulated sum_hyperbolic(const std::vector<GroupWord>& elems, int dim,
                              double norm_bound, bool deterministic, const TermFn& f) {
    const long count = static_cast<long>(elems.size());
    const auto terms = evaluate_terms(count, deterministic, f);
    HypAccumulated out{Multivector(dim), 0.0, 0.0, count};
    KahanMV full(dim);
    for (long i = 0; i < count; ++i) {
        const auto& t = terms[static_cast<std::size_t>(i)];
        full.add(t);
        const double rn = bottom_row_norm_sq(elems[static_cast<std::size_t>(i)].matrix);
        if (rn > 0.25 * norm_bound) {
            out.outer_mass += t.norm();
            out.max_outer = std::max(out.max_outer, t.norm());
        }
    }
    out.full = full.sum;
    return out;
}

double hyp_tail_estimate(const HypAccumulated& acc) {
    return 2.0 * acc.outer_mass + 2.0 * acc.max_outer;
}

}  // namespace

SeriesResult hyperbolic_eisenstein(const Paravector& x, int p, int N, double sigma,
                                   double norm_bound, const SeriesOptions& opts) {
    const int n = x.n();
    if (x.component(n) <= 0.0)
        throw std::domain_error("evaluation point must lie in upper half space");
    if (N < 2) throw std::domain_error("level must be at least 2");
    if (sigma <= 0.0) throw std::domain_error("sigma must be positive");
    const auto& elems = congruence_elements(n, p, N, norm_bound, opts, true);
    const double xn = x.component(n);
    auto acc = sum_hyperbolic(
        elems, n, norm_bound, opts.deterministic, [&](long i) {
            const VahlenMatrix& M = elems[static_cast<std::size_t>(i)].matrix;
            const Multivector j = moebius_denominator(M, x);
            const double nsq = j.norm_sq();
            if (nsq < 1e-18) throw pole_error("denominator vanished in orbit sum");
            return q0_of(j, n) * std::pow(xn / nsq, sigma);
        });
    SeriesResult res;
    res.value = std::move(acc.full);
    res.truncation_radius = std::sqrt(norm_bound);
    res.tail_bound = hyp_tail_estimate(acc);
    res.terms_summed = acc.count;
    return res;
}

SeriesResult poincare_series(const Paravector& x, const Paravector& w, int p, int N,
                             double sigma, double norm_bound,
                             const SeriesOptions& opts) {
    const int n = x.n();
    if (x.component(n) <= 0.0)
        throw std::domain_error("evaluation point must lie in upper half space");
    if (sigma <= 0.0) throw std::domain_error("sigma must be positive");
    const auto& elems = congruence_elements(n, p, N, norm_bound, opts, false);
    const double xn = x.component(n);
    auto acc = sum_hyperbolic(
        elems, n, norm_bound, opts.deterministic, [&](long i) {
            const VahlenMatrix& M = elems[static_cast<std::size_t>(i)].matrix;
            const Multivector j = moebius_denominator(M, x);
            const double nsq = j.norm_sq();
            if (nsq < 1e-18) throw pole_error("denominator vanished in orbit sum");
            const Paravector mx = mobius_apply(M, x, 1e-6);
            return q0_of(j, n) * std::pow(xn / nsq, sigma) * q0_of(w + mx);
        });
    SeriesResult res;
    res.value = std::move(acc.full);
    res.truncation_radius = std::sqrt(norm_bound);
    res.tail_bound = hyp_tail_estimate(acc);
    res.terms_summed = acc.count;
    return res;
}

SeriesResult hyperbolic_cauchy_kernel(const Paravector& x, const Paravector& y, int p,
                                      int N, double norm_bound,
                                      const SeriesOptions& opts) {
    const int n = x.n();
    if (x.component(n) <= 0.0 || y.component(n) <= 0.0)
        throw std::domain_error("both points must lie in upper half space");
    if (p >= n - 1)
        throw std::domain_error("kernel sum converges only for p < n - 1");
    const auto& elems = congruence_elements(n, p, N, norm_bound, opts, false);
    auto acc = sum_hyperbolic(
        elems, n, norm_bound, opts.deterministic, [&](long i) {
            const VahlenMatrix& M = elems[static_cast<std::size_t>(i)].matrix;
            const Paravector mx = mobius_apply(M, x, 1e-6);
            return automorphy_factor(M, x) * q0_of(y - mx);
        });
    SeriesResult res;
    res.value = std::move(acc.full);
    res.truncation_radius = std::sqrt(norm_bound);
    res.tail_bound = hyp_tail_estimate(acc);
    res.terms_summed = acc.count;
    return res;
}

Multivector hecke_extrapolate(const std::vector<double>& sigmas,
                              const std::vector<Multivector>& values) {
    if (sigmas.size() != values.size() || sigmas.size() < 2)
        throw std::invalid_argument("need matching sigma/value lists of length >= 2");
    const std::size_t k = sigmas.size();
    // least-squares line v = a + b*sigma per coefficient; report a
    double sum_s = 0.0, sum_ss = 0.0;
    for (double s : sigmas) {
        sum_s += s;
        sum_ss += s * s;
    }
    const double det = static_cast<double>(k) * sum_ss - sum_s * sum_s;
    if (std::abs(det) < 1e-30) throw std::invalid_argument("degenerate sigma schedule");
    Multivector a(values[0].dim());
    for (std::size_t c = 0; c < a.size(); ++c) {
        double sum_v = 0.0, sum_sv = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            sum_v += values[i][static_cast<std::uint32_t>(c)];
            sum_sv += sigmas[i] * values[i][static_cast<std::uint32_t>(c)];
        }
        a[static_cast<std::uint32_t>(c)] = (sum_ss * sum_v - sum_s * sum_sv) / det;
    }
    return a;
}

}  // namespace cla
