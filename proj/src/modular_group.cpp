#include "cla/modular_group.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>

namespace cla {

std::vector<VahlenMatrix> gamma_p_generators(int n, int p) {
    if (n < 1) throw std::invalid_argument("vector dimension must be positive");
    if (p < 0 || p >= n) throw std::invalid_argument("rank parameter must satisfy 0 <= p < n");
    std::vector<VahlenMatrix> gens;
    gens.push_back(VahlenMatrix::translation(Multivector::scalar(n, 1.0)));
    for (int i = 1; i <= p; ++i)
        gens.push_back(VahlenMatrix::translation(Multivector::basis(n, i)));
    gens.push_back(VahlenMatrix::inversion(n));
    return gens;
}

namespace {

// Rounds to the nearest integer; throws when the coefficient is not within
// 1e-9 of one. Congruence membership is only meaningful on integral matrices.
long long integral_coeff(double v) {
    const double r = std::nearbyint(v);
    if (std::abs(v - r) > 1e-9)
        throw std::invalid_argument("matrix entry has a non-integer coefficient");
    return static_cast<long long>(r);
}

bool entry_in_N_Op(const Multivector& e, int N, int p) {
    const uint32_t span_mask = (p >= 32) ? ~0u : ((1u << p) - 1u);
    for (std::size_t mask = 0; mask < e.size(); ++mask) {
        const long long c = integral_coeff(e[mask]);
        if (c == 0) continue;
        if ((static_cast<uint32_t>(mask) & ~span_mask) != 0) return false;
        if (c % N != 0) return false;
    }
    return true;
}

}  // namespace

bool in_congruence_subgroup(const VahlenMatrix& m, int N, int p) {
    if (N < 1) throw std::invalid_argument("level must be positive");
    Multivector a_off = m.a;
    a_off[0] -= 1.0;
    Multivector d_off = m.d;
    d_off[0] -= 1.0;
    return entry_in_N_Op(a_off, N, p) && entry_in_N_Op(m.b, N, p) &&
           entry_in_N_Op(m.c, N, p) && entry_in_N_Op(d_off, N, p);
}

namespace {

using Key = std::vector<long long>;

Key matrix_key(const VahlenMatrix& m) {
    Key k;
    k.reserve(4 * m.a.size());
    for (const Multivector* e : {&m.a, &m.b, &m.c, &m.d})
        for (std::size_t i = 0; i < e->size(); ++i)
            k.push_back(std::llround((*e)[i] * 1e6));
    return k;
}

Key negate_key(const Key& k) {
    Key out(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) out[i] = -k[i];
    return out;
}

Key canonical_key(Key k, bool pm_quotient) {
    if (!pm_quotient) return k;
    Key neg = negate_key(k);
    return (neg < k) ? neg : k;
}

Key bottom_row_key(const VahlenMatrix& m, bool pm_quotient) {
    Key k;
    k.reserve(2 * m.c.size());
    for (const Multivector* e : {&m.c, &m.d})
        for (std::size_t i = 0; i < e->size(); ++i)
            k.push_back(std::llround((*e)[i] * 1e6));
    return canonical_key(std::move(k), pm_quotient);
}

std::vector<GroupWord> enumerate_impl(const std::vector<VahlenMatrix>& generators,
                                      const EnumOptions& options, bool coset_mode) {
    if (generators.empty()) throw std::invalid_argument("no generators");
    const int dim = generators[0].dim();

    struct Step {
        VahlenMatrix matrix;
        int label;
    };
    std::vector<Step> steps;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        steps.push_back({generators[i], static_cast<int>(i) + 1});
        steps.push_back({matrix_inverse(generators[i]), -(static_cast<int>(i) + 1)});
    }

    const double expand_bound = options.norm_bound * options.expand_slack;
    std::map<Key, int> seen;  // key -> index into nodes
    std::vector<GroupWord> nodes;
    std::deque<int> frontier;

    GroupWord id{VahlenMatrix::identity(dim), {}};
    seen.emplace(canonical_key(matrix_key(id.matrix), options.pm_quotient), 0);
    nodes.push_back(id);
    frontier.push_back(0);

    while (!frontier.empty()) {
        const int idx = frontier.front();
        frontier.pop_front();
        if (static_cast<int>(nodes[idx].word.size()) >= options.max_word_length) continue;
        // nodes[idx] may be invalidated by push_back below; copy what we need.
        const GroupWord cur = nodes[idx];
        for (const Step& s : steps) {
            VahlenMatrix child = matrix_mul(cur.matrix, s.matrix);
            if (bottom_row_norm_sq(child) > expand_bound) continue;
            Key key = canonical_key(matrix_key(child), options.pm_quotient);
            if (seen.count(key)) continue;
            GroupWord gw;
            gw.matrix = std::move(child);
            gw.word = cur.word;
            gw.word.push_back(s.label);
            seen.emplace(std::move(key), static_cast<int>(nodes.size()));
            frontier.push_back(static_cast<int>(nodes.size()));
            nodes.push_back(std::move(gw));
        }
    }

    std::vector<GroupWord> out;
    std::map<Key, bool> rows_taken;
    for (GroupWord& gw : nodes) {
        if (bottom_row_norm_sq(gw.matrix) > options.norm_bound + 1e-9) continue;
        if (coset_mode) {
            Key row = bottom_row_key(gw.matrix, options.pm_quotient);
            if (rows_taken.count(row)) continue;
            rows_taken.emplace(std::move(row), true);
        }
        out.push_back(std::move(gw));
    }
    return out;
}

}  // namespace

std::vector<GroupWord> enumerate_group(const std::vector<VahlenMatrix>& generators,
                                       const EnumOptions& options) {
    return enumerate_impl(generators, options, false);
}

std::vector<GroupWord> enumerate_coset_reps(const std::vector<VahlenMatrix>& generators,
                                            const EnumOptions& options) {
    return enumerate_impl(generators, options, true);
}

std::vector<GroupWord> filter_congruence(const std::vector<GroupWord>& words, int N,
                                         int p) {
    std::vector<GroupWord> out;
    for (const GroupWord& gw : words)
        if (in_congruence_subgroup(gw.matrix, N, p)) out.push_back(gw);
    return out;
}

}  // namespace cla
