#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "cla/modular_group.hpp"

using namespace cla;

namespace {

// Integer bottom row of a rank-one (n = 1, p = 0) group element.
std::pair<long, long> int_bottom_row(const VahlenMatrix& m) {
    return {std::lround(m.c[0]), std::lround(m.d[0])};
}

VahlenMatrix product_of_word(const std::vector<VahlenMatrix>& gens,
                             const std::vector<int>& word) {
    VahlenMatrix m = VahlenMatrix::identity(gens[0].dim());
    for (int label : word) {
        const VahlenMatrix& g = gens[std::abs(label) - 1];
        m = matrix_mul(m, label > 0 ? g : matrix_inverse(g));
    }
    return m;
}

}  // namespace

TEST_CASE("generator lists") {
    auto g10 = gamma_p_generators(1, 0);
    CHECK(g10.size() == 2);
    auto g32 = gamma_p_generators(3, 2);
    CHECK(g32.size() == 4);
    for (const auto& g : g32) CHECK(is_vahlen(g));
    CHECK_THROWS_AS(gamma_p_generators(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(gamma_p_generators(1, 1), std::invalid_argument);
}

TEST_CASE("coset representatives of the rank-one group match the coprime-pair oracle") {
    EnumOptions opt;
    opt.max_word_length = 14;
    opt.norm_bound = 25.0;
    opt.pm_quotient = false;
    auto reps = enumerate_coset_reps(gamma_p_generators(1, 0), opt);

    std::set<std::pair<long, long>> found;
    for (const auto& gw : reps) {
        auto row = int_bottom_row(gw.matrix);
        CHECK(found.count(row) == 0);
        found.insert(row);
    }

    std::set<std::pair<long, long>> oracle;
    for (long c = -5; c <= 5; ++c)
        for (long d = -5; d <= 5; ++d) {
            if (c * c + d * d > 25 || (c == 0 && d == 0)) continue;
            if (std::gcd(std::abs(c), std::abs(d)) == 1) oracle.insert({c, d});
        }

    CHECK(found == oracle);
}

TEST_CASE("words reproduce their matrices and the group closes") {
    auto gens = gamma_p_generators(2, 1);
    EnumOptions opt;
    opt.max_word_length = 5;
    opt.norm_bound = 10.0;
    auto words = enumerate_group(gens, opt);
    CHECK(words.size() > 10);
    CHECK(words[0].word.empty());  // identity discovered first

    for (const auto& gw : words) {
        CHECK(is_vahlen(gw.matrix, 1e-9));
        VahlenMatrix rebuilt = product_of_word(gens, gw.word);
        double diff = (rebuilt.a - gw.matrix.a).norm() + (rebuilt.b - gw.matrix.b).norm() +
                      (rebuilt.c - gw.matrix.c).norm() + (rebuilt.d - gw.matrix.d).norm();
        CHECK(diff <= 1e-10);
    }
}

TEST_CASE("enumeration is deterministic") {
    auto gens = gamma_p_generators(2, 1);
    EnumOptions opt;
    opt.max_word_length = 4;
    auto a = enumerate_group(gens, opt);
    auto b = enumerate_group(gens, opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].word == b[i].word);
    }
}

TEST_CASE("congruence membership") {
    auto gens = gamma_p_generators(2, 1);
    const auto& t1 = gens[0];  // translation by 1
    const auto& j = gens[2];

    CHECK(in_congruence_subgroup(t1, 1, 1));
    CHECK_FALSE(in_congruence_subgroup(t1, 2, 1));
    CHECK(in_congruence_subgroup(matrix_mul(t1, t1), 2, 1));
    CHECK(in_congruence_subgroup(matrix_mul(matrix_mul(t1, t1), t1), 3, 1));
    CHECK_FALSE(in_congruence_subgroup(j, 2, 1));
    CHECK(in_congruence_subgroup(VahlenMatrix::identity(2), 7, 1));

    // an entry outside the allowed blade span fails even at level 1
    VahlenMatrix off = VahlenMatrix::translation(Multivector::basis(2, 2));
    CHECK(is_vahlen(off));
    CHECK_FALSE(in_congruence_subgroup(off, 1, 1));
    CHECK(in_congruence_subgroup(off, 1, 2));

    VahlenMatrix frac = VahlenMatrix::translation(Multivector::scalar(2, 0.5));
    CHECK_THROWS_AS(in_congruence_subgroup(frac, 2, 1), std::invalid_argument);
}

TEST_CASE("level-N filtering against direct modular arithmetic") {
    EnumOptions opt;
    opt.max_word_length = 10;
    opt.norm_bound = 16.0;
    opt.pm_quotient = false;
    auto words = enumerate_group(gamma_p_generators(1, 0), opt);
    REQUIRE(words.size() > 50);

    for (int N : {2, 3}) {
        auto filtered = filter_congruence(words, N, 0);
        std::size_t direct = 0;
        for (const auto& gw : words) {
            const long a = std::lround(gw.matrix.a[0]);
            const long b = std::lround(gw.matrix.b[0]);
            const long c = std::lround(gw.matrix.c[0]);
            const long d = std::lround(gw.matrix.d[0]);
            const bool member = ((a - 1) % N == 0) && (b % N == 0) && (c % N == 0) &&
                                ((d - 1) % N == 0);
            if (member) ++direct;
            CHECK(member == in_congruence_subgroup(gw.matrix, N, 0));
        }
        CHECK(filtered.size() == direct);
        CHECK(filtered.size() > 1);  // identity plus translations by N at least
    }
}

TEST_CASE("pm quotient keeps one representative per sign pair") {
    auto gens = gamma_p_generators(1, 0);
    EnumOptions with, without;
    with.max_word_length = without.max_word_length = 8;
    with.norm_bound = without.norm_bound = 8.0;
    with.pm_quotient = true;
    without.pm_quotient = false;
    auto q = enumerate_group(gens, with);
    auto full = enumerate_group(gens, without);
    CHECK(q.size() < full.size());

    auto entries = [](const VahlenMatrix& m) {
        return std::array<long, 4>{std::lround(m.a[0]), std::lround(m.b[0]),
                                   std::lround(m.c[0]), std::lround(m.d[0])};
    };
    std::set<std::array<long, 4>> qset;
    for (const auto& gw : q) qset.insert(entries(gw.matrix));
    for (const auto& e : qset)
        CHECK(qset.count({-e[0], -e[1], -e[2], -e[3]}) == 0);

    // -identity is J^2; present without the quotient, merged with it
    std::set<std::array<long, 4>> fullset;
    for (const auto& gw : full) fullset.insert(entries(gw.matrix));
    CHECK(fullset.count({-1, 0, 0, -1}) == 1);
    CHECK(qset.count({-1, 0, 0, -1}) == 0);
}
